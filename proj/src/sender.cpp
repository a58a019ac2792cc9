#include "braillecam/sender.hpp"

#include <istream>
#include <ostream>

#include "json_util.hpp"

namespace braillecam {

void LoopbackTransport::write(std::string_view bytes) {
  if (closed_) throw TransportClosed();
  for (char c : bytes) {
    if (c == '\n') {
      rx_.push_back(std::move(partial_));
      partial_.clear();
    } else {
      partial_.push_back(c);
    }
  }
}

std::optional<std::string> LoopbackTransport::read_line(double /*timeout_s*/) {
  if (closed_) throw TransportClosed();
  std::string response;
  if (!rx_.empty()) {
    response = controller_.feed_line(rx_.front());
    rx_.pop_front();
  } else if (auto report = controller_.idle_cycle()) {
    response = std::move(*report);
  } else {
    return std::nullopt;
  }
  if (!response.empty() && response.back() == '\n') response.pop_back();
  return response;
}

void FileTransport::write(std::string_view bytes) {
  if (closed_) throw TransportClosed();
  tx_ << bytes;
  tx_.flush();
}

std::optional<std::string> FileTransport::read_line(double /*timeout_s*/) {
  if (closed_) throw TransportClosed();
  std::string line;
  if (!std::getline(rx_, line)) return std::nullopt;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

void RecordingTransport::write(std::string_view bytes) {
  inner_.write(bytes);
  if (sent_) *sent_ << bytes;
}

std::optional<std::string> RecordingTransport::read_line(double timeout_s) {
  auto line = inner_.read_line(timeout_s);
  if (line) {
    responses_.push_back(*line);
    if (received_) *received_ << *line << '\n';
  }
  return line;
}

void SenderConfig::validate() const {
  if (window < 1) throw InvalidArgument("sender window must be >= 1");
  if (qr_floor < 0) throw InvalidArgument("sender qr_floor must be >= 0");
  if (!(response_timeout > 0)) throw InvalidArgument("response_timeout must be > 0");
}

MalformedResponse::MalformedResponse(std::string_view line)
    : Error("MalformedResponse", "malformed controller response: " + std::string(line)) {}

Response parse_response(std::string_view line) {
  while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) {
    line.remove_suffix(1);
  }
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(line);
  } catch (const nlohmann::json::exception&) {
    throw MalformedResponse(line);
  }
  if (!j.is_object() || j.empty()) throw MalformedResponse(line);

  auto key_at = [&](std::size_t i) { return std::next(j.begin(), static_cast<long>(i)).key(); };
  auto is_count = [](const nlohmann::ordered_json& v) {
    return v.is_number_integer() && v.get<long long>() >= 0;
  };

  if (j.size() == 2 && key_at(0) == "r" && key_at(1) == "qr") {
    const auto& r = j["r"];
    if (!r.is_object() || r.size() != 1 || !r.contains("n") || !is_count(r["n"]) ||
        !is_count(j["qr"])) {
      throw MalformedResponse(line);
    }
    return response::Ack{r["n"].get<int>(), j["qr"].get<int>()};
  }
  if (j.size() == 1 && key_at(0) == "er") {
    const auto& er = j["er"];
    if (!er.is_object() || !er.contains("msg") || !er["msg"].is_string()) {
      throw MalformedResponse(line);
    }
    response::Failure f{std::nullopt, er["msg"].get<std::string>()};
    if (er.size() == 2) {
      if (std::next(er.begin()).key() != "msg" || er.begin().key() != "n" || !is_count(er["n"])) {
        throw MalformedResponse(line);
      }
      f.n = er["n"].get<int>();
    } else if (er.size() != 1) {
      throw MalformedResponse(line);
    }
    return f;
  }
  if (j.size() == 1 && key_at(0) == "qr" && is_count(j["qr"])) {
    return response::QueueReport{j["qr"].get<int>()};
  }
  throw MalformedResponse(line);
}

namespace {

struct ProgramLine {
  int source_line;
  std::string text;
};

std::vector<ProgramLine> split_program(std::string_view text) {
  std::vector<ProgramLine> lines;
  int number = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++number;
    std::string line(text.substr(start, end - start));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") != std::string::npos) {
      lines.push_back({number, std::move(line)});
    }
    start = end + 1;
  }
  return lines;
}

}  // namespace

TransferReport stream(std::string_view program_text, Transport& transport,
                      const SenderConfig& cfg) {
  cfg.validate();
  const std::vector<ProgramLine> lines = split_program(program_text);
  TransferReport report;
  const double start = transport.now();

  std::deque<std::size_t> unacked;  // indices into `lines`, in send order
  std::size_t next = 0;
  // Free-slot estimate: the last reported qr minus lines sent since that
  // report, each of which may have taken a slot.
  std::optional<int> last_qr;
  int sent_since_qr = 0;
  std::optional<int> last_ack_n;
  bool stopping = false;

  auto current_line = [&] {
    if (!unacked.empty()) return lines[unacked.front()].source_line;
    if (next < lines.size()) return lines[next].source_line;
    return lines.empty() ? 0 : lines.back().source_line;
  };
  auto fail = [&](int line, std::string message) {
    report.errors.push_back({line, std::move(message)});
    stopping = true;
  };

  try {
    while (true) {
      while (!stopping && next < lines.size() &&
             static_cast<int>(unacked.size()) < cfg.window &&
             (!last_qr || *last_qr - sent_since_qr > cfg.qr_floor)) {
        transport.write(lines[next].text + "\n");
        unacked.push_back(next++);
        ++report.lines_sent;
        ++sent_since_qr;
        report.max_inflight = std::max(report.max_inflight, static_cast<int>(unacked.size()));
      }
      if (unacked.empty() && (stopping || next == lines.size())) break;

      std::optional<std::string> raw = transport.read_line(cfg.response_timeout);
      if (!raw) {
        report.errors.push_back({current_line(), "timeout waiting for controller response"});
        break;
      }
      Response resp;
      try {
        resp = parse_response(*raw);
      } catch (const MalformedResponse& e) {
        report.errors.push_back({current_line(), e.what()});
        break;
      }

      if (auto* ack = std::get_if<response::Ack>(&resp)) {
        if (unacked.empty()) {
          report.errors.push_back({current_line(), "unexpected acknowledgement"});
          break;
        }
        if (last_ack_n && ack->n <= *last_ack_n) {
          report.errors.push_back({current_line(), "acknowledgement out of order"});
          break;
        }
        last_ack_n = ack->n;
        unacked.pop_front();
        ++report.lines_acked;
        last_qr = ack->qr;
        sent_since_qr = static_cast<int>(unacked.size());
      } else if (auto* failure = std::get_if<response::Failure>(&resp)) {
        const int line = current_line();
        if (failure->n) last_ack_n = failure->n;
        if (!unacked.empty()) unacked.pop_front();
        fail(line, failure->message);
      } else if (auto* report_qr = std::get_if<response::QueueReport>(&resp)) {
        last_qr = report_qr->qr;
        sent_since_qr = static_cast<int>(unacked.size());
      }
    }
  } catch (const TransportClosed& e) {
    report.errors.push_back({current_line(), e.what()});
  }

  report.elapsed = transport.now() - start;
  return report;
}

std::string report_to_json(const TransferReport& report) {
  nlohmann::ordered_json doc;
  doc["lines_sent"] = report.lines_sent;
  doc["lines_acked"] = report.lines_acked;
  doc["max_inflight"] = report.max_inflight;
  auto errors = nlohmann::ordered_json::array();
  for (const TransferError& e : report.errors) {
    errors.push_back({{"line", e.line}, {"message", e.message}});
  }
  doc["errors"] = std::move(errors);
  doc["elapsed"] = detail::round3(report.elapsed);
  return doc.dump() + "\n";
}

}  // namespace braillecam
