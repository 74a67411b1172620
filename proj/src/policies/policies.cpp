#include "seekbench/policies/policies.hpp"

#include "internal.hpp"
#include "seekbench/core/errors.hpp"

namespace seekbench::policies {

std::string_view to_string(Kind k) { return k == Kind::naive ? "naive" : "seeker"; }

Kind parse_kind(std::string_view name) {
  if (name == "naive") return Kind::naive;
  if (name == "seeker") return Kind::seeker;
  throw UsageError("unknown policy '" + std::string(name) + "' (expected naive or seeker)");
}

std::unique_ptr<Policy> make_policy(Kind kind, const Environment& env) {
  if (const auto* e = dynamic_cast<const arm::ArmEnv*>(&env)) return detail::arm_policy(kind, e->public_task());
  if (const auto* e = dynamic_cast<const nav::NavEnv*>(&env)) return detail::nav_policy(kind, e->public_task());
  if (const auto* e = dynamic_cast<const color::ColorEnv*>(&env)) return detail::color_policy(kind, e->public_task());
  if (const auto* e = dynamic_cast<const blocks::BlocksEnv*>(&env)) {
    return detail::blocks_policy(kind, e->public_task());
  }
  throw UsageError("no policy for task " + env.spec().id());
}

PolicyRun run_policy(Environment& env, Policy& policy) {
  std::string last;
  while (!env.done()) {
    const auto command = policy.next(last);
    if (!command) break;
    last = env.step(*command).observation;
  }
  return {env.success(), env.steps_used()};
}

}  // namespace seekbench::policies
