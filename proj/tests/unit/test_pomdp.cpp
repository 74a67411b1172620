#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "pomdp_oracle.hpp"
#include "seekbench/core/rng.hpp"
#include "seekbench/pomdp/io.hpp"
#include "seekbench/pomdp/pomdp.hpp"

using namespace seekbench;
using namespace seekbench::pomdp;
using Catch::Approx;

namespace {

using M = Matrix<double>;
using B = Belief<double>;

B belief(std::initializer_list<double> v) {
  B b(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) b(i++) = x;
  return b;
}

M stochastic(Rng& rng, Eigen::Index rows, Eigen::Index cols, bool sparse) {
  M m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    double sum = 0.0;
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = (sparse && rng.unit() < 0.3) ? 0.0 : rng.unit();
      sum += m(r, c);
    }
    if (sum == 0.0) {
      m(r, 0) = 1.0;
      sum = 1.0;
    }
    m.row(r) /= sum;
    m(r, cols - 1) = 0.0;
    m(r, cols - 1) = std::max(0.0, 1.0 - m.row(r).sum());
  }
  return m;
}

struct Random {
  DiscretePomdp<double> model;
  oracle::Model plain;
};

Random random_pomdp(Rng& rng) {
  const auto S = static_cast<Eigen::Index>(1 + rng.index(5));
  const auto A = 1 + rng.index(5);
  const auto Z = static_cast<Eigen::Index>(1 + rng.index(5));
  std::vector<M> T, O;
  M R(S, static_cast<Eigen::Index>(A));
  for (std::size_t a = 0; a < A; ++a) {
    T.push_back(stochastic(rng, S, S, true));
    O.push_back(stochastic(rng, S, Z, true));
  }
  for (Eigen::Index s = 0; s < S; ++s)
    for (Eigen::Index a = 0; a < R.cols(); ++a) R(s, a) = rng.unit() < 0.3 ? 1.0 : 0.0;
  const double gamma = 0.95 * rng.unit();

  oracle::Model plain;
  auto to_plain = [](const M& m) {
    oracle::Mat out(static_cast<std::size_t>(m.rows()), oracle::Vec(static_cast<std::size_t>(m.cols())));
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c) out[r][c] = m(r, c);
    return out;
  };
  for (std::size_t a = 0; a < A; ++a) {
    plain.T.push_back(to_plain(T[a]));
    plain.O.push_back(to_plain(O[a]));
  }
  plain.R = to_plain(R);
  plain.gamma = gamma;
  return {DiscretePomdp<double>(T, O, R, gamma), plain};
}

B random_belief(Rng& rng, std::size_t n) {
  B b(static_cast<Eigen::Index>(n));
  for (auto& x : b) x = rng.unit() + 1e-3;
  return b / b.sum();
}

oracle::Vec plain(const B& b) { return {b.begin(), b.end()}; }

}  // namespace

TEST_CASE("model validation") {
  const M I = M::Identity(2, 2);
  M bad = I;
  bad(0, 1) = 0.1;
  CHECK_THROWS_AS(DiscretePomdp<double>({bad}, {I}, M::Zero(2, 1), 0.9), InvalidModel);
  CHECK_THROWS_AS(DiscretePomdp<double>({I}, {bad}, M::Zero(2, 1), 0.9), InvalidModel);
  CHECK_THROWS_AS(DiscretePomdp<double>({I}, {I}, M::Constant(2, 1, 0.5), 0.9), InvalidModel);
  CHECK_NOTHROW(DiscretePomdp<double>({I}, {I}, M::Constant(2, 1, 0.5), 0.9, RewardCheck::any));
  CHECK_THROWS_AS(DiscretePomdp<double>({I}, {I}, M::Zero(2, 1), 1.0), InvalidModel);
  CHECK_THROWS_AS(DiscretePomdp<double>({I}, {I}, M::Zero(2, 2), 0.5), InvalidModel);
}

TEST_CASE("observation likelihood") {
  const M I = M::Identity(3, 3);
  const DiscretePomdp<double> flat({I}, {M::Constant(3, 4, 0.25)}, M::Zero(3, 1), 0.5);
  for (std::size_t o = 0; o < 4; ++o) CHECK(obs_likelihood(flat, belief({0.2, 0.3, 0.5}), 0, o) == Approx(0.25));

  const DiscretePomdp<double> det({I}, {I}, M::Zero(3, 1), 0.5);
  CHECK(obs_likelihood(det, belief({0, 1, 0}), 0, 1) == 1.0);
  CHECK(obs_likelihood(det, belief({0, 1, 0}), 0, 0) == 0.0);

  const auto t = tiger();
  CHECK(obs_likelihood(t, belief({0.5, 0.5}), 0, 0) == Approx(0.5).margin(1e-15));
}

TEST_CASE("belief update") {
  const M I = M::Identity(2, 2);
  const DiscretePomdp<double> flat({I}, {M::Constant(2, 3, 1.0 / 3)}, M::Zero(2, 1), 0.5);
  const B b = belief({0.3, 0.7});
  CHECK(belief_update(flat, b, 0, 2).isApprox(b, 1e-15));

  const auto t = tiger();
  const B heard = belief_update(t, belief({0.5, 0.5}), 0, 0);
  CHECK(heard(0) == Approx(0.85).margin(1e-15));
  CHECK(heard(1) == Approx(0.15).margin(1e-15));

  M silent(2, 2);
  silent << 1.0, 0.0, 1.0, 0.0;
  const DiscretePomdp<double> never({I}, {silent}, M::Zero(2, 1), 0.5);
  CHECK_THROWS_AS(belief_update(never, b, 0, 1), ImpossibleObservation);
}

TEST_CASE("optimal value basics") {
  const auto t = tiger();
  const B uniform = belief({0.5, 0.5});
  const auto h0 = optimal_value(t, uniform, 0);
  CHECK(h0.value == 0.0);
  CHECK_FALSE(h0.action.has_value());

  const auto h1 = optimal_value(t, uniform, 1);
  CHECK(h1.value == Approx(0.5));
  CHECK(h1.action == 1u);  // open-left and open-right tie; lowest index wins

  const B sure = belief({0.0, 1.0});
  CHECK(optimal_value(t, sure, 1).action == 1u);

  const M I = M::Identity(2, 2);
  const DiscretePomdp<double> zero({I, I}, {I, I}, M::Zero(2, 2), 0.9);
  for (int h = 0; h <= 5; ++h) CHECK(optimal_value(zero, uniform, h).value == 0.0);

  CHECK_THROWS_AS(optimal_value(t, uniform, 9), HorizonTooLarge);
  CHECK_THROWS_WITH(optimal_value(t, uniform, 9), Catch::Matchers::ContainsSubstring("8"));
  CHECK_NOTHROW(optimal_value(t, uniform, 3, 3));
  CHECK_THROWS_AS(optimal_value(t, uniform, -1), std::invalid_argument);
}

TEST_CASE("tiger at horizon 3 matches the enumerator") {
  const auto t = tiger();
  oracle::Model ref;
  for (std::size_t a = 0; a < 3; ++a) {
    oracle::Mat T(2, oracle::Vec(2)), O(2, oracle::Vec(2));
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) {
        T[r][c] = t.transition(a)(r, c);
        O[r][c] = t.observation(a)(r, c);
      }
    ref.T.push_back(T);
    ref.O.push_back(O);
  }
  ref.R = {{0, 0, 1}, {0, 1, 0}};
  ref.gamma = 0.95;
  for (const B& b : {belief({0.5, 0.5}), belief({0.9, 0.1}), belief({0.2, 0.8})}) {
    CHECK(std::abs(optimal_value(t, b, 3).value - oracle::value(ref, plain(b), 3)) <= 1e-9);
  }
}

TEST_CASE("random models agree with the oracle") {
  Rng rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    const auto [m, p] = random_pomdp(rng);
    const B b = random_belief(rng, m.num_states());
    for (std::size_t a = 0; a < m.num_actions(); ++a) {
      for (std::size_t o = 0; o < m.num_observations(); ++o) {
        const double lik = obs_likelihood(m, b, a, o);
        REQUIRE(std::abs(lik - oracle::likelihood(p, plain(b), a, o)) <= 1e-12);
        if (lik <= 0.0) {
          REQUIRE_THROWS_AS(belief_update(m, b, a, o), ImpossibleObservation);
          continue;
        }
        const B next = belief_update(m, b, a, o);
        REQUIRE(std::abs(next.sum() - 1.0) <= 1e-12);
        const auto expected = oracle::posterior(p, plain(b), a, o);
        for (Eigen::Index s = 0; s < next.size(); ++s) REQUIRE(std::abs(next(s) - expected[s]) <= 1e-9);
      }
    }
    double previous = 0.0;
    for (int h = 0; h <= 4; ++h) {
      const double v = optimal_value(m, b, h).value;
      REQUIRE(std::abs(v - oracle::value(p, plain(b), h)) <= 1e-9);
      REQUIRE(v >= previous - 1e-12);
      previous = v;
    }
  }
}

TEST_CASE("scaling rewards keeps the argmax") {
  Rng rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const auto [m, p] = random_pomdp(rng);
    const B b = random_belief(rng, m.num_states());
    std::vector<M> T, O;
    for (std::size_t a = 0; a < m.num_actions(); ++a) {
      T.push_back(m.transition(a));
      O.push_back(m.observation(a));
    }
    const DiscretePomdp<double> scaled(T, O, 3.5 * m.reward(), m.discount(), RewardCheck::any);
    for (int h = 1; h <= 3; ++h) {
      const auto base = optimal_value(m, b, h);
      const auto big = optimal_value(scaled, b, h);
      REQUIRE(big.value == Approx(3.5 * base.value).epsilon(1e-12).margin(1e-12));
      if (base.value > 0.0) REQUIRE(big.action == base.action);
    }
  }
}

TEST_CASE("single precision instantiation") {
  using Mf = Matrix<float>;
  const Mf I = Mf::Identity(2, 2);
  Mf hear(2, 2);
  hear << 0.85f, 0.15f, 0.15f, 0.85f;
  const DiscretePomdp<float> m({I}, {hear}, Mf::Zero(2, 1), 0.5f);
  Belief<float> b(2);
  b << 0.5f, 0.5f;
  CHECK(belief_update(m, b, 0, 0)(0) == Approx(0.85f).margin(1e-6));
}

TEST_CASE("json round trip") {
  const auto t = tiger();
  const auto j = to_json(t);
  const auto back = from_json(j);
  CHECK(back.action_names == t.action_names);
  for (std::size_t a = 0; a < 3; ++a) CHECK(back.transition(a) == t.transition(a));
  CHECK(back.reward() == t.reward());

  auto broken = j;
  broken["transition"][0][0] = {0.7, 0.7};
  CHECK_THROWS_AS(from_json(broken), InvalidModel);
  broken = j;
  broken.erase("reward");
  CHECK_THROWS_AS(from_json(broken), InvalidModel);

  const auto path = std::filesystem::temp_directory_path() / "seekbench_tiger.json";
  std::ofstream(path) << j.dump(2);
  CHECK(load_file(path.string()).num_states() == 2);
  CHECK_THROWS_AS(load_file("/nonexistent/tiger.json"), InvalidModel);
}
