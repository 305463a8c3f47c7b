#include "mojikit/serial_transport.h"

#include <fcntl.h>
#include <poll.h>
#include <termios.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>

namespace mojikit {
namespace {

// Longest reply line kept while waiting for its newline.
constexpr std::size_t kMaxBuffered = 256;

speed_t baud_constant(std::int64_t baud) {
  switch (baud) {
    case 9600: return B9600;
    case 19200: return B19200;
    case 38400: return B38400;
    case 57600: return B57600;
    case 115200: return B115200;
    case 230400: return B230400;
    default: throw SerialError("unsupported baud rate " + std::to_string(baud));
  }
}

std::string errno_text(const std::string& what) {
  return what + ": " + std::strerror(errno);
}

}  // namespace

SerialTransport SerialTransport::open_device(const std::string& path, std::int64_t baud) {
  const speed_t speed = baud_constant(baud);
  const int fd = ::open(path.c_str(), O_RDWR | O_NOCTTY | O_CLOEXEC);
  if (fd < 0) throw SerialError(errno_text("open " + path));
  termios tio{};
  if (::tcgetattr(fd, &tio) != 0) {
    const std::string msg = errno_text("tcgetattr " + path);
    ::close(fd);
    throw SerialError(msg);
  }
  ::cfmakeraw(&tio);
  tio.c_cflag |= CLOCAL | CREAD;
  tio.c_cflag &= ~(CSTOPB | PARENB);
  tio.c_cc[VMIN] = 0;
  tio.c_cc[VTIME] = 0;
  ::cfsetispeed(&tio, speed);
  ::cfsetospeed(&tio, speed);
  if (::tcsetattr(fd, TCSANOW, &tio) != 0) {
    const std::string msg = errno_text("tcsetattr " + path);
    ::close(fd);
    throw SerialError(msg);
  }
  return SerialTransport(fd);
}

SerialTransport::SerialTransport(int fd) : fd_(fd) {}

SerialTransport::~SerialTransport() { close(); }

SerialTransport::SerialTransport(SerialTransport&& other) noexcept
    : fd_(other.fd_), buffer_(std::move(other.buffer_)) {
  other.fd_ = -1;
}

void SerialTransport::close() {
  if (fd_ >= 0) ::close(fd_);
  fd_ = -1;
}

void SerialTransport::write(std::string_view bytes, Millis) {
  while (fd_ >= 0 && !bytes.empty()) {
    const ssize_t n = ::write(fd_, bytes.data(), bytes.size());
    if (n < 0) {
      if (errno == EINTR || errno == EAGAIN) continue;
      close();
      return;
    }
    bytes.remove_prefix(static_cast<std::size_t>(n));
  }
}

std::optional<std::string> SerialTransport::take_line() {
  const std::size_t nl = buffer_.find('\n');
  if (nl == std::string::npos) {
    if (buffer_.size() > kMaxBuffered) buffer_.clear();
    return std::nullopt;
  }
  std::string line = buffer_.substr(0, nl + 1);
  buffer_.erase(0, nl + 1);
  return line;
}

std::optional<std::string> SerialTransport::read_line(Millis, Millis wait_ms) {
  using Clock = std::chrono::steady_clock;
  const auto until = Clock::now() + std::chrono::milliseconds(std::max<Millis>(wait_ms, 0));
  while (true) {
    if (auto line = take_line()) return line;
    if (fd_ < 0) return std::nullopt;
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(until - Clock::now());
    pollfd pfd{fd_, POLLIN, 0};
    const int ready = ::poll(&pfd, 1, static_cast<int>(std::max<std::int64_t>(left.count(), 0)));
    if (ready < 0) {
      if (errno == EINTR) continue;
      close();
      return std::nullopt;
    }
    if (ready == 0) return std::nullopt;
    char chunk[128];
    const ssize_t n = ::read(fd_, chunk, sizeof chunk);
    if (n > 0) {
      buffer_.append(chunk, static_cast<std::size_t>(n));
      continue;
    }
    if (n < 0 && (errno == EINTR || errno == EAGAIN)) continue;
    // EOF, or EIO once the other end of a pty goes away.
    close();
    return take_line();
  }
}

}  // namespace mojikit
