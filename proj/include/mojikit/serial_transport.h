// Transport over a POSIX serial device (or any file descriptor that behaves
// like one, such as a pseudo-terminal).

#ifndef MOJIKIT_SERIAL_TRANSPORT_H_
#define MOJIKIT_SERIAL_TRANSPORT_H_

#include <stdexcept>
#include <string>

#include "mojikit/protocol.h"

namespace mojikit {

class SerialError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SerialTransport : public Transport {
 public:
  // Opens `path` in raw 8N1 mode at `baud`. Throws SerialError on failure or
  // when the baud rate has no termios constant.
  static SerialTransport open_device(const std::string& path, std::int64_t baud);

  // Takes ownership of an already configured descriptor.
  explicit SerialTransport(int fd);
  ~SerialTransport() override;
  SerialTransport(SerialTransport&& other) noexcept;
  SerialTransport& operator=(SerialTransport&&) = delete;
  SerialTransport(const SerialTransport&) = delete;
  SerialTransport& operator=(const SerialTransport&) = delete;

  bool is_open() const override { return fd_ >= 0; }
  void close();

  // A failed write closes the transport.
  void write(std::string_view bytes, Millis now_ms) override;
  // Waits up to `wait_ms` of wall time for a complete line. End of file or a
  // read error closes the transport.
  std::optional<std::string> read_line(Millis now_ms, Millis wait_ms) override;

 private:
  std::optional<std::string> take_line();

  int fd_;
  std::string buffer_;
};

}  // namespace mojikit

#endif  // MOJIKIT_SERIAL_TRANSPORT_H_
