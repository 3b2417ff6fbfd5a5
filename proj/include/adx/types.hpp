#pragma once

#include <cstdint>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <variant>

namespace adx {

enum class BlockId : std::uint64_t {};
enum class NodeId : std::uint16_t {};

constexpr std::uint64_t to_u64(BlockId id) { return static_cast<std::uint64_t>(id); }
constexpr std::uint16_t to_u16(NodeId id) { return static_cast<std::uint16_t>(id); }

inline std::ostream& operator<<(std::ostream& out, BlockId id) { return out << to_u64(id); }
inline std::ostream& operator<<(std::ostream& out, NodeId id) { return out << to_u16(id); }

/// A single attribute value. Fixed-width strings are carried without their
/// trailing NUL padding.
using Value = std::variant<std::int64_t, double, std::string>;

std::string to_string(const Value& v);

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

class RegistryError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class PlanningError : public Error {
 public:
  using Error::Error;
};

}  // namespace adx
