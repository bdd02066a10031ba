#pragma once

#include <stdexcept>
#include <string>

namespace mafia {

// Invalid game or experiment configuration (bad counts, unknown profile, ...).
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// A rule of the game was violated (vote for a dead player, mafia targeting
// mafia, query by a non-detective, ...).
class ProtocolError : public std::logic_error {
public:
    explicit ProtocolError(const std::string& what) : std::logic_error(what) {}
};

// An analysis operation was evaluated outside its mathematical domain.
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// A decision procedure exceeded its per-decision budget.
class LivenessError : public std::runtime_error {
public:
    explicit LivenessError(const std::string& what) : std::runtime_error(what) {}
};

// Bad invocation of a library operation (too few fit points, ...).
class UsageError : public std::invalid_argument {
public:
    explicit UsageError(const std::string& what) : std::invalid_argument(what) {}
};

} // namespace mafia
