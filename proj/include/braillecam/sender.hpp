#pragma once

#include <deque>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "braillecam/error.hpp"
#include "braillecam/machine.hpp"

namespace braillecam {

class TransportClosed : public Error {
 public:
  TransportClosed() : Error("TransportClosed", "transport closed") {}
};

// Ordered, reliable byte stream to a controller.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual void write(std::string_view bytes) = 0;
  // One response line without its LF, or nullopt when nothing arrives
  // within the timeout.
  virtual std::optional<std::string> read_line(double timeout_s) = 0;
  virtual void close() = 0;
  // Transport clock in seconds. Simulated transports report simulated time.
  virtual double now() const { return 0.0; }
};

// In-process link to a virtual controller. Every read is one controller
// response cycle, so timeouts cost no wall-clock time.
class LoopbackTransport : public Transport {
 public:
  explicit LoopbackTransport(Controller& controller) : controller_(controller) {}
  void write(std::string_view bytes) override;
  std::optional<std::string> read_line(double timeout_s) override;
  void close() override { closed_ = true; }
  double now() const override { return controller_.machine().state().clock; }

 private:
  Controller& controller_;
  std::string partial_;
  std::deque<std::string> rx_;
  bool closed_ = false;
};

// Writes go to `tx`; responses are replayed from `rx`, one per line.
class FileTransport : public Transport {
 public:
  FileTransport(std::ostream& tx, std::istream& rx) : tx_(tx), rx_(rx) {}
  void write(std::string_view bytes) override;
  std::optional<std::string> read_line(double timeout_s) override;
  void close() override { closed_ = true; }

 private:
  std::ostream& tx_;
  std::istream& rx_;
  bool closed_ = false;
};

// Tees traffic of another transport. Either log may be null.
class RecordingTransport : public Transport {
 public:
  RecordingTransport(Transport& inner, std::ostream* sent, std::ostream* received)
      : inner_(inner), sent_(sent), received_(received) {}
  void write(std::string_view bytes) override;
  std::optional<std::string> read_line(double timeout_s) override;
  void close() override { inner_.close(); }
  double now() const override { return inner_.now(); }
  const std::vector<std::string>& responses() const { return responses_; }

 private:
  Transport& inner_;
  std::ostream* sent_;
  std::ostream* received_;
  std::vector<std::string> responses_;
};

struct SenderConfig {
  int window = 4;       // max unacknowledged lines
  int qr_floor = 2;     // pause while estimated free slots <= floor
  double response_timeout = 5.0;  // seconds

  void validate() const;
};

struct TransferError {
  int line;  // source line in the program text
  std::string message;
};

struct TransferReport {
  int lines_sent = 0;
  int lines_acked = 0;
  int max_inflight = 0;
  std::vector<TransferError> errors;
  double elapsed = 0;

  bool ok() const { return errors.empty(); }
};

namespace response {
struct Ack {
  int n;
  int qr;
};
struct Failure {
  std::optional<int> n;
  std::string message;
};
struct QueueReport {
  int qr;
};
}  // namespace response
using Response = std::variant<response::Ack, response::Failure, response::QueueReport>;

class MalformedResponse : public Error {
 public:
  explicit MalformedResponse(std::string_view line);
};

Response parse_response(std::string_view line);

TransferReport stream(std::string_view program_text, Transport& transport,
                      const SenderConfig& cfg);

std::string report_to_json(const TransferReport& report);

}  // namespace braillecam
