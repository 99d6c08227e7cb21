#pragma once

#include <stdexcept>
#include <string>

#include "samarl/policy.hpp"

namespace samarl::nn {

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kCheckpointVersion = 1;

/// Writes a versioned JSON container holding the policy configuration and
/// both parameter stores (values only; optimizer state is not persisted).
void save_checkpoint(const std::string& path, const PolicyConfig& cfg,
                     const ParamStore& actor, const ParamStore& critic);

struct Checkpoint {
  PolicyConfig config;
  ParamStore actor;
  ParamStore critic;
};

/// Loads and validates a checkpoint; throws CheckpointError on a bad schema,
/// version mismatch, or malformed tensors.
Checkpoint load_checkpoint(const std::string& path);

}  // namespace samarl::nn
