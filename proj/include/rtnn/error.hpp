#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace rtnn {

/// Base class for every error raised by the library. None of these are ever
/// thrown from a per-frame forward or reset call.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed JSON. `byte_offset` points at the offending byte of the input.
class ParseError : public Error {
public:
    ParseError(std::size_t byte_offset, const std::string& what)
        : Error("parse error at byte " + std::to_string(byte_offset) + ": " + what),
          byte_offset_(byte_offset) {}

    std::size_t byte_offset() const noexcept { return byte_offset_; }

private:
    std::size_t byte_offset_;
};

class UnsupportedLayer : public Error {
public:
    explicit UnsupportedLayer(std::string kind)
        : Error("unsupported layer type '" + kind + "'"), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

/// A structurally valid document that breaks a schema rule: wrong weight
/// count, broken shape chain, missing field and so on. `layer()` is empty for
/// top-level fields.
class ValidationError : public Error {
public:
    ValidationError(std::optional<std::size_t> layer, std::string field, std::string message,
                    std::optional<std::size_t> expected = std::nullopt,
                    std::optional<std::size_t> actual = std::nullopt)
        : Error(format(layer, field, message)),
          layer_(layer),
          field_(std::move(field)),
          expected_(expected),
          actual_(actual) {}

    std::optional<std::size_t> layer() const noexcept { return layer_; }
    const std::string& field() const noexcept { return field_; }
    std::optional<std::size_t> expected() const noexcept { return expected_; }
    std::optional<std::size_t> actual() const noexcept { return actual_; }

private:
    static std::string format(std::optional<std::size_t> layer, const std::string& field,
                              const std::string& message) {
        std::string out = "validation error";
        if (layer) out += " in layer " + std::to_string(*layer);
        out += " ('" + field + "'): " + message;
        return out;
    }

    std::optional<std::size_t> layer_;
    std::string field_;
    std::optional<std::size_t> expected_;
    std::optional<std::size_t> actual_;
};

class LoadError : public Error {
public:
    using Error::Error;
};

/// A model description that does not match a compile-time composition.
class ArchitectureMismatch : public Error {
public:
    ArchitectureMismatch(std::size_t layer, const std::string& what)
        : Error("architecture mismatch at layer " + std::to_string(layer) + ": " + what),
          layer_(layer) {}

    std::size_t layer() const noexcept { return layer_; }

private:
    std::size_t layer_;
};

class InvalidMeasurement : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace rtnn
