#pragma once

#include <stdexcept>
#include <string>

namespace scn {

/// Rate requested from a base station that is asleep.
class InactiveServer : public std::runtime_error {
 public:
  explicit InactiveServer(const std::string& what) : std::runtime_error(what) {}
};

/// No active base station is available to a UE.
class NoCoverage : public std::runtime_error {
 public:
  explicit NoCoverage(const std::string& what) : std::runtime_error(what) {}
};

/// Every member of a cluster sleeps while the cluster still owns UEs.
class UncoveredUes : public std::runtime_error {
 public:
  explicit UncoveredUes(const std::string& what) : std::runtime_error(what) {}
};

class ActionSpaceTooLarge : public std::runtime_error {
 public:
  explicit ActionSpaceTooLarge(const std::string& what) : std::runtime_error(what) {}
};

class InfeasibleDensity : public std::runtime_error {
 public:
  explicit InfeasibleDensity(const std::string& what) : std::runtime_error(what) {}
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace scn
