#pragma once

#include <stdexcept>
#include <string>

namespace spikefeat {

/// Exception carrying the pipeline stage that raised it ("frontend",
/// "wav", "hmm", ...). what() is "[stage] message".
class Error : public std::runtime_error {
public:
    Error(std::string stage, std::string message)
        : std::runtime_error("[" + stage + "] " + message),
          stage_(std::move(stage)),
          message_(std::move(message)) {}

    const std::string& stage() const noexcept { return stage_; }
    const std::string& message() const noexcept { return message_; }

private:
    std::string stage_;
    std::string message_;
};

} // namespace spikefeat
