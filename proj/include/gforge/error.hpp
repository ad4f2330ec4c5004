#pragma once

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace gforge {

/// Broad failure class; the CLI maps each kind to an exit code.
enum class ErrorKind { Parse = 1, Precondition = 2, Budget = 3, Internal = 4 };

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

struct ParseError : Error {
  explicit ParseError(const std::string& w) : Error(ErrorKind::Parse, w) {}
};

struct PreconditionError : Error {
  explicit PreconditionError(const std::string& w) : Error(ErrorKind::Precondition, w) {}
};

struct BudgetError : Error {
  explicit BudgetError(const std::string& w) : Error(ErrorKind::Budget, w) {}
};

/// Raised when two independent computations disagree. Always a bug.
struct InternalError : Error {
  explicit InternalError(const std::string& w) : Error(ErrorKind::Internal, w) {}
};

/// Size limits shared by every module. Values can be overridden through the
/// GFORGE_CAPS environment variable, e.g. GFORGE_CAPS="order=1024,h2=20".
struct Caps {
  std::size_t groupOrder = 512;
  std::size_t h2Order = 16;
  std::size_t algebraDim = 4096;
  std::size_t designated = 6;

  static Caps fromEnvironment() {
    Caps caps;
    const char* env = std::getenv("GFORGE_CAPS");
    if (env == nullptr) return caps;
    std::string text(env);
    std::size_t pos = 0;
    while (pos < text.size()) {
      std::size_t end = text.find(',', pos);
      if (end == std::string::npos) end = text.size();
      std::string item = text.substr(pos, end - pos);
      std::size_t eq = item.find('=');
      if (eq != std::string::npos) {
        std::string key = item.substr(0, eq);
        std::size_t value = std::stoul(item.substr(eq + 1));
        if (key == "order") caps.groupOrder = value;
        else if (key == "h2") caps.h2Order = value;
        else if (key == "algebra") caps.algebraDim = value;
        else if (key == "designated") caps.designated = value;
        else throw ParseError("unknown GFORGE_CAPS key '" + key + "'");
      }
      pos = end + 1;
    }
    return caps;
  }
};

inline const Caps& defaultCaps() {
  static const Caps caps = Caps::fromEnvironment();
  return caps;
}

}  // namespace gforge
