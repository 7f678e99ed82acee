#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace zodiaclab {

// Invalid or out-of-range configuration. Messages name the offending field.
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Filesystem / stream failure.
class io_error : public std::runtime_error {
public:
    explicit io_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Training produced a non-finite loss or parameter (divergent learning rate).
class divergence_error : public std::runtime_error {
public:
    divergence_error(std::string model, const std::string& msg)
        : std::runtime_error(model + ": " + msg), model_(std::move(model)) {}

    const std::string& model() const noexcept { return model_; }

private:
    std::string model_;
};

}  // namespace zodiaclab
