#include "braillecam/braille.hpp"

#include <array>
#include <cstdio>

namespace braillecam {
namespace {

// Standard English Grade-1 letters, dot numbers packed as bit masks.
constexpr std::array<std::uint8_t, 26> kLetters = {
    0x01, 0x03, 0x09, 0x19, 0x11, 0x0B, 0x1B, 0x13, 0x0A, 0x1A,  // a-j
    0x05, 0x07, 0x0D, 0x1D, 0x15, 0x0F, 0x1F, 0x17, 0x0E, 0x1E,  // k-t
    0x25, 0x27, 0x3A, 0x2D, 0x3D, 0x35,                          // u-z
};

struct Punct {
  char ch;
  std::uint8_t mask;
};
constexpr std::array<Punct, 8> kPunctuation = {{
    {'.', 0x32},   // dots 2,5,6
    {',', 0x02},   // dot 2
    {'?', 0x26},   // dots 2,3,6
    {'!', 0x16},   // dots 2,3,5
    {'-', 0x24},   // dots 3,6
    {'\'', 0x04},  // dot 3
    {':', 0x12},   // dots 2,5
    {';', 0x06},   // dots 2,3
}};
constexpr std::string_view kPunctChars = ".,?!-':;";

constexpr char32_t kReplacement = 0xFFFD;

std::optional<char> letter_for_mask(unsigned mask) {
  for (std::size_t i = 0; i < kLetters.size(); ++i) {
    if (kLetters[i] == mask) return static_cast<char>('a' + i);
  }
  return std::nullopt;
}

std::optional<char> digit_for_mask(unsigned mask) {
  for (std::size_t i = 0; i < 10; ++i) {
    if (kLetters[i] == mask) return i == 9 ? '0' : static_cast<char>('1' + i);
  }
  return std::nullopt;
}

std::optional<char> punct_for_mask(unsigned mask) {
  for (const auto& p : kPunctuation) {
    if (p.mask == mask) return p.ch;
  }
  return std::nullopt;
}

std::string describe(char32_t ch) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "U+%04X", static_cast<unsigned>(ch));
  return buf;
}

}  // namespace

BrailleCell::BrailleCell(unsigned mask) {
  if (mask > 63) {
    throw InvalidArgument("braille cell mask " + std::to_string(mask) +
                          " outside 0..63");
  }
  mask_ = static_cast<std::uint8_t>(mask);
}

UnsupportedCharacter::UnsupportedCharacter(std::size_t position, char32_t ch,
                                           std::size_t line, std::size_t column,
                                           const std::string& reason)
    : Error("UnsupportedCharacter",
            "unsupported character " + describe(ch) + " at line " +
                std::to_string(line) + ", column " + std::to_string(column) +
                ": " + reason),
      position(position),
      character(ch),
      line(line),
      column(column) {}

OutOfRange::OutOfRange(char32_t cp)
    : Error("OutOfRange",
            describe(cp) + " is outside the six-dot braille block"),
      codepoint(cp) {}

UndecodableSequence::UndecodableSequence(std::size_t position,
                                         const std::string& reason)
    : Error("UndecodableSequence",
            "undecodable cell at " + std::to_string(position) + ": " + reason),
      position(position) {}

BrailleCell letter_cell(char lower) {
  if (lower < 'a' || lower > 'z') {
    throw InvalidArgument(std::string("not a lowercase letter: ") + lower);
  }
  return BrailleCell(kLetters[lower - 'a']);
}

std::optional<BrailleCell> punctuation_cell(char ch) {
  for (const auto& p : kPunctuation) {
    if (p.ch == ch) return BrailleCell(p.mask);
  }
  return std::nullopt;
}

std::string_view supported_punctuation() { return kPunctChars; }

BrailleText encode_text(std::string_view utf8, UnknownCharPolicy policy,
                        Warnings* warnings) {
  BrailleText out;
  if (utf8.empty()) return out;

  const std::u32string text = utf8_to_u32(utf8);
  out.emplace_back();
  bool in_number = false;
  std::size_t line = 1;
  std::size_t column = 0;

  auto reject = [&](std::size_t pos, char32_t ch, const std::string& reason) {
    if (policy == UnknownCharPolicy::kStrict) {
      throw UnsupportedCharacter(pos, ch, line, column, reason);
    }
    if (warnings) {
      warnings->push_back("line " + std::to_string(line) + ", column " +
                          std::to_string(column) + ": " + describe(ch) + " " +
                          reason + "; blank cell emitted");
    }
    out.back().emplace_back();
    in_number = false;
  };

  for (std::size_t pos = 0; pos < text.size(); ++pos) {
    const char32_t ch = text[pos];
    ++column;
    CellLine& cells = out.back();
    if (ch == U'\n') {
      out.emplace_back();
      in_number = false;
      ++line;
      column = 0;
    } else if (ch >= U'0' && ch <= U'9') {
      if (!in_number) cells.emplace_back(kNumberIndicator);
      const int index = ch == U'0' ? 9 : static_cast<int>(ch - U'1');
      cells.emplace_back(kLetters[index]);
      in_number = true;
    } else if (ch >= U'a' && ch <= U'z') {
      if (in_number && ch <= U'j') {
        // Would be read back as a digit.
        reject(pos, ch, "letter a-j directly after a digit is ambiguous");
      }
      out.back().push_back(letter_cell(static_cast<char>(ch)));
      in_number = false;
    } else if (ch >= U'A' && ch <= U'Z') {
      cells.emplace_back(kCapitalIndicator);
      cells.push_back(letter_cell(static_cast<char>(ch - U'A' + U'a')));
      in_number = false;
    } else if (ch == U' ') {
      cells.emplace_back();
      in_number = false;
    } else if (ch < 0x80 && punctuation_cell(static_cast<char>(ch))) {
      cells.push_back(*punctuation_cell(static_cast<char>(ch)));
      in_number = false;
    } else {
      reject(pos, ch, "is not in the supported character set");
    }
  }
  return out;
}

namespace {

// Positions in errors are reported as base + index.
std::string decode_span(std::span<const BrailleCell> cells, std::size_t base) {
  std::string out;
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::size_t capital_at = kNone;
  std::size_t number_at = kNone;  // indicator awaiting its first digit
  bool numeric = false;

  for (std::size_t i = 0; i < cells.size(); ++i) {
    const unsigned m = cells[i].mask();
    if (m == kCapitalIndicator) {
      if (capital_at != kNone) throw UndecodableSequence(base + capital_at, "dangling capital indicator");
      if (number_at != kNone) throw UndecodableSequence(base + number_at, "dangling number indicator");
      capital_at = i;
      numeric = false;
      continue;
    }
    if (m == kNumberIndicator) {
      if (capital_at != kNone) throw UndecodableSequence(base + capital_at, "dangling capital indicator");
      if (numeric) throw UndecodableSequence(base + i, "repeated number indicator");
      numeric = true;
      number_at = i;
      continue;
    }
    if (numeric) {
      if (auto d = digit_for_mask(m)) {
        out.push_back(*d);
        number_at = kNone;
        continue;
      }
      if (number_at != kNone) throw UndecodableSequence(base + number_at, "dangling number indicator");
      numeric = false;
    }
    if (capital_at != kNone) {
      auto letter = letter_for_mask(m);
      if (!letter) throw UndecodableSequence(base + capital_at, "dangling capital indicator");
      out.push_back(static_cast<char>(*letter - 'a' + 'A'));
      capital_at = kNone;
      continue;
    }
    if (m == 0) {
      out.push_back(' ');
    } else if (auto letter = letter_for_mask(m)) {
      out.push_back(*letter);
    } else if (auto p = punct_for_mask(m)) {
      out.push_back(*p);
    } else {
      throw UndecodableSequence(base + i, "no reverse mapping for mask " + std::to_string(m));
    }
  }
  if (capital_at != kNone) throw UndecodableSequence(base + capital_at, "dangling capital indicator");
  if (number_at != kNone) throw UndecodableSequence(base + number_at, "dangling number indicator");
  return out;
}

}  // namespace

std::string decode_cells(std::span<const BrailleCell> cells) {
  return decode_span(cells, 0);
}

std::string decode_cells(const BrailleText& text) {
  std::string out;
  std::size_t offset = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (i > 0) out.push_back('\n');
    out += decode_span(text[i], offset);
    offset += text[i].size();
  }
  return out;
}

BrailleCell unicode_to_cell(char32_t codepoint) {
  if (codepoint < kBrailleBlockBase || codepoint > kBrailleBlockBase + 63) {
    throw OutOfRange(codepoint);
  }
  return BrailleCell(static_cast<unsigned>(codepoint - kBrailleBlockBase));
}

BrailleCell mirror_cell(BrailleCell cell) {
  const unsigned m = cell.mask();
  return BrailleCell(((m & 0x07u) << 3) | ((m & 0x38u) >> 3));
}

std::u32string utf8_to_u32(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    int len = 0;
    char32_t cp = 0;
    if (b0 < 0x80) {
      len = 1;
      cp = b0;
    } else if ((b0 & 0xE0) == 0xC0) {
      len = 2;
      cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3;
      cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4;
      cp = b0 & 0x07;
    } else {
      out.push_back(kReplacement);
      ++i;
      continue;
    }
    if (i + len > s.size()) {
      out.push_back(kReplacement);
      break;
    }
    bool ok = true;
    for (int k = 1; k < len; ++k) {
      const auto b = static_cast<unsigned char>(s[i + k]);
      if ((b & 0xC0) != 0x80) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (b & 0x3F);
    }
    if (!ok) {
      out.push_back(kReplacement);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

std::string u32_to_utf8(std::u32string_view text) {
  std::string out;
  for (char32_t cp : text) {
    if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
  }
  return out;
}

std::string to_unicode_braille(const BrailleText& text) {
  std::u32string out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (i > 0) out.push_back(U'\n');
    for (BrailleCell c : text[i]) out.push_back(cell_to_unicode(c));
  }
  return u32_to_utf8(out);
}

BrailleText from_unicode_braille(std::string_view utf8) {
  BrailleText out;
  if (utf8.empty()) return out;
  out.emplace_back();
  for (char32_t cp : utf8_to_u32(utf8)) {
    if (cp == U'\n') {
      out.emplace_back();
    } else {
      out.back().push_back(unicode_to_cell(cp));
    }
  }
  return out;
}

}  // namespace braillecam
