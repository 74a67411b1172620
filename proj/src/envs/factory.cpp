#include "seekbench/core/environment.hpp"
#include "seekbench/core/errors.hpp"
#include "seekbench/envs/arm.hpp"
#include "seekbench/envs/blocks.hpp"
#include "seekbench/envs/color.hpp"
#include "seekbench/envs/nav.hpp"

namespace seekbench {

std::unique_ptr<Environment> make_env(const TaskSpec& spec) {
  spec.validate();
  switch (spec.family) {
    case Family::arm: return std::make_unique<arm::ArmEnv>(spec);
    case Family::nav: return std::make_unique<nav::NavEnv>(spec);
    case Family::color: return std::make_unique<color::ColorEnv>(spec);
    case Family::blocks_single:
    case Family::blocks_multiple: return std::make_unique<blocks::BlocksEnv>(spec);
  }
  throw InvalidTask("unknown task family");
}

}  // namespace seekbench
