#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "braillecam/error.hpp"

namespace braillecam {

// One six-dot Braille cell. Bit (i-1) of the mask is set when dot i is
// raised. Dots 1-3 run top to bottom in the left column, 4-6 in the right.
class BrailleCell {
 public:
  constexpr BrailleCell() = default;
  // Throws InvalidArgument when mask > 63.
  explicit BrailleCell(unsigned mask);

  constexpr std::uint8_t mask() const { return mask_; }
  constexpr bool raised(int dot) const { return (mask_ >> (dot - 1)) & 1u; }
  constexpr bool blank() const { return mask_ == 0; }

  friend constexpr bool operator==(BrailleCell, BrailleCell) = default;

 private:
  std::uint8_t mask_ = 0;
};

using CellLine = std::vector<BrailleCell>;
// Encoded text: one CellLine per logical (newline-separated) line.
using BrailleText = std::vector<CellLine>;

inline constexpr unsigned kCapitalIndicator = 0x20;  // dot 6
inline constexpr unsigned kNumberIndicator = 0x3C;   // dots 3,4,5,6
inline constexpr char32_t kBrailleBlockBase = 0x2800;

enum class UnknownCharPolicy { kStrict, kReplace };

class UnsupportedCharacter : public Error {
 public:
  UnsupportedCharacter(std::size_t position, char32_t ch, std::size_t line,
                       std::size_t column, const std::string& reason);
  std::size_t position;  // codepoint index in the input
  char32_t character;
  std::size_t line;    // 1-based
  std::size_t column;  // 1-based, in codepoints
};

class OutOfRange : public Error {
 public:
  explicit OutOfRange(char32_t codepoint);
  char32_t codepoint;
};

class UndecodableSequence : public Error {
 public:
  UndecodableSequence(std::size_t position, const std::string& reason);
  std::size_t position;  // cell index, counted across lines
};

// Grade-1 letter table (a..z) and supported punctuation.
BrailleCell letter_cell(char lower);
std::optional<BrailleCell> punctuation_cell(char ch);
// Every character accepted by encode_text besides letters, digits, space and
// newline.
std::string_view supported_punctuation();

BrailleText encode_text(std::string_view utf8,
                        UnknownCharPolicy policy = UnknownCharPolicy::kStrict,
                        Warnings* warnings = nullptr);

std::string decode_cells(std::span<const BrailleCell> cells);
// Lines are decoded independently and joined with '\n'.
std::string decode_cells(const BrailleText& text);

constexpr char32_t cell_to_unicode(BrailleCell cell) {
  return kBrailleBlockBase + cell.mask();
}
BrailleCell unicode_to_cell(char32_t codepoint);

BrailleCell mirror_cell(BrailleCell cell);

// UTF-8 helpers shared by the CLI and bindings.
std::u32string utf8_to_u32(std::string_view utf8);
std::string u32_to_utf8(std::u32string_view text);
std::string to_unicode_braille(const BrailleText& text);
BrailleText from_unicode_braille(std::string_view utf8);

}  // namespace braillecam
