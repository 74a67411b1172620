#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <fmt/format.h>

namespace seekbench::pomdp {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// A probability vector over states.
template <typename Scalar>
using Belief = Vector<Scalar>;

class InvalidModel : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The observation has zero probability under the belief and action, so
/// Bayes' rule is undefined.
class ImpossibleObservation : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class HorizonTooLarge : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

enum class RewardCheck { binary, any };

/// Tabular POMDP.
///
/// transition[a](s, s') = T(s' | s, a); observation[a](s', o) = O(o | s', a),
/// i.e. observations are emitted from the successor state; reward(s, a).
template <typename Scalar = double>
class DiscretePomdp {
 public:
  static constexpr Scalar kStochasticTolerance = Scalar(1e-12);

  DiscretePomdp(std::vector<Matrix<Scalar>> transition, std::vector<Matrix<Scalar>> observation,
                Matrix<Scalar> reward, Scalar discount, RewardCheck reward_check = RewardCheck::binary)
      : transition_(std::move(transition)),
        observation_(std::move(observation)),
        reward_(std::move(reward)),
        discount_(discount) {
    validate(reward_check);
  }

  std::size_t num_states() const { return static_cast<std::size_t>(reward_.rows()); }
  std::size_t num_actions() const { return transition_.size(); }
  std::size_t num_observations() const { return static_cast<std::size_t>(observation_.front().cols()); }

  const Matrix<Scalar>& transition(std::size_t a) const { return transition_.at(a); }
  const Matrix<Scalar>& observation(std::size_t a) const { return observation_.at(a); }
  const Matrix<Scalar>& reward() const { return reward_; }
  Scalar discount() const { return discount_; }

  std::vector<std::string> state_names;
  std::vector<std::string> action_names;
  std::vector<std::string> observation_names;

 private:
  void validate(RewardCheck reward_check) const {
    if (transition_.empty() || transition_.size() != observation_.size()) {
      throw InvalidModel("need one transition and one observation matrix per action");
    }
    const auto S = reward_.rows();
    if (S == 0 || reward_.cols() != static_cast<Eigen::Index>(transition_.size())) {
      throw InvalidModel("reward must be |S| x |A|");
    }
    const auto Z = observation_.front().cols();
    if (Z == 0) throw InvalidModel("need at least one observation");
    for (std::size_t a = 0; a < transition_.size(); ++a) {
      const auto& T = transition_[a];
      const auto& O = observation_[a];
      if (T.rows() != S || T.cols() != S) throw InvalidModel(fmt::format("transition[{}] must be |S| x |S|", a));
      if (O.rows() != S || O.cols() != Z) throw InvalidModel(fmt::format("observation[{}] must be |S| x |Z|", a));
      if ((T.array() < Scalar(0)).any() || (O.array() < Scalar(0)).any()) {
        throw InvalidModel(fmt::format("negative probability under action {}", a));
      }
      for (Eigen::Index s = 0; s < S; ++s) {
        if (std::abs(T.row(s).sum() - Scalar(1)) > kStochasticTolerance) {
          throw InvalidModel(fmt::format("transition[{}] row {} does not sum to 1", a, s));
        }
        if (std::abs(O.row(s).sum() - Scalar(1)) > kStochasticTolerance) {
          throw InvalidModel(fmt::format("observation[{}] row {} does not sum to 1", a, s));
        }
      }
    }
    if (reward_check == RewardCheck::binary &&
        !((reward_.array() == Scalar(0)) || (reward_.array() == Scalar(1))).all()) {
      throw InvalidModel("reward must take values in {0, 1}");
    }
    if (!(discount_ >= Scalar(0) && discount_ < Scalar(1))) throw InvalidModel("discount must lie in [0, 1)");
  }

  std::vector<Matrix<Scalar>> transition_;
  std::vector<Matrix<Scalar>> observation_;
  Matrix<Scalar> reward_;
  Scalar discount_;
};

template <typename Scalar>
bool is_belief(const DiscretePomdp<Scalar>& m, const Belief<Scalar>& b, Scalar tol = Scalar(1e-12)) {
  return static_cast<std::size_t>(b.size()) == m.num_states() && (b.array() >= Scalar(0)).all() &&
         std::abs(b.sum() - Scalar(1)) <= tol;
}

/// Predicted successor-state distribution sum_s T(s'|s,a) b(s).
template <typename Scalar>
Vector<Scalar> predict(const DiscretePomdp<Scalar>& m, const Belief<Scalar>& b, std::size_t a) {
  return m.transition(a).transpose() * b;
}

/// P(o | b, a) = sum_s' O(o|s',a) sum_s T(s'|s,a) b(s).
template <typename Scalar>
Scalar obs_likelihood(const DiscretePomdp<Scalar>& m, const Belief<Scalar>& b, std::size_t a, std::size_t o) {
  return m.observation(a).col(static_cast<Eigen::Index>(o)).dot(predict(m, b, a));
}

/// Bayes filter step. Throws ImpossibleObservation when P(o | b, a) == 0.
template <typename Scalar>
Belief<Scalar> belief_update(const DiscretePomdp<Scalar>& m, const Belief<Scalar>& b, std::size_t a,
                             std::size_t o) {
  const Vector<Scalar> joint =
      m.observation(a).col(static_cast<Eigen::Index>(o)).cwiseProduct(predict(m, b, a));
  const Scalar likelihood = joint.sum();
  if (!(likelihood > Scalar(0))) {
    throw ImpossibleObservation(fmt::format("observation {} has zero likelihood after action {}", o, a));
  }
  return joint / likelihood;
}

template <typename Scalar>
struct ValueResult {
  Scalar value = Scalar(0);
  std::optional<std::size_t> action;  // empty at horizon 0
};

inline constexpr int kDefaultHorizonCap = 8;

namespace detail {

template <typename Scalar>
Scalar expectimax(const DiscretePomdp<Scalar>& m, const Belief<Scalar>& b, int horizon,
                  std::optional<std::size_t>* best_action) {
  if (horizon == 0) return Scalar(0);
  Scalar best = -std::numeric_limits<Scalar>::infinity();
  for (std::size_t a = 0; a < m.num_actions(); ++a) {
    Scalar q = b.dot(m.reward().col(static_cast<Eigen::Index>(a)));
    if (horizon > 1 && m.discount() > Scalar(0)) {
      const Vector<Scalar> predicted = predict(m, b, a);
      Scalar future = Scalar(0);
      for (std::size_t o = 0; o < m.num_observations(); ++o) {
        const Vector<Scalar> joint =
            m.observation(a).col(static_cast<Eigen::Index>(o)).cwiseProduct(predicted);
        const Scalar p = joint.sum();
        if (!(p > Scalar(0))) continue;
        future += p * expectimax<Scalar>(m, joint / p, horizon - 1, nullptr);
      }
      q += m.discount() * future;
    }
    if (q > best) {  // strict: ties keep the lowest action index
      best = q;
      if (best_action) *best_action = a;
    }
  }
  return best;
}

}  // namespace detail

/// Finite-horizon optimal value by exact expectimax over (action, observation)
/// trees. Zero-probability observation branches are skipped. Exponential in
/// `horizon`; refuses horizons above `cap`.
template <typename Scalar>
ValueResult<Scalar> optimal_value(const DiscretePomdp<Scalar>& m, const Belief<Scalar>& b, int horizon,
                                  int cap = kDefaultHorizonCap) {
  if (horizon < 0) throw std::invalid_argument("horizon must be non-negative");
  if (horizon > cap) {
    throw HorizonTooLarge(fmt::format("horizon {} exceeds the configured cap of {}", horizon, cap));
  }
  ValueResult<Scalar> out;
  out.value = detail::expectimax(m, b, horizon, &out.action);
  return out;
}

}  // namespace seekbench::pomdp
