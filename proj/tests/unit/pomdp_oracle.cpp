#include "pomdp_oracle.hpp"

#include <algorithm>
#include <limits>

namespace oracle {

Mat joint(const Model& m, const Vec& b, std::size_t a) {
  const std::size_t S = b.size();
  const std::size_t Z = m.O[a][0].size();
  Mat p(S, Vec(Z, 0.0));
  for (std::size_t s = 0; s < S; ++s)
    for (std::size_t s2 = 0; s2 < S; ++s2)
      for (std::size_t o = 0; o < Z; ++o) p[s2][o] += b[s] * m.T[a][s][s2] * m.O[a][s2][o];
  return p;
}

double likelihood(const Model& m, const Vec& b, std::size_t a, std::size_t o) {
  const Mat p = joint(m, b, a);
  double total = 0.0;
  for (const auto& row : p) total += row[o];
  return total;
}

Vec posterior(const Model& m, const Vec& b, std::size_t a, std::size_t o) {
  const Mat p = joint(m, b, a);
  const double z = likelihood(m, b, a, o);
  Vec out(b.size());
  for (std::size_t s = 0; s < b.size(); ++s) out[s] = p[s][o] / z;
  return out;
}

namespace {

// W_h(w) for an unnormalized belief w: by positive homogeneity of the value
// function, sum_o P(o) V(b_o) == sum_o W(w_o) with w_o the unnormalized
// successor, so no division is needed.
double unnormalized(const Model& m, const Vec& w, int h) {
  if (h == 0) return 0.0;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < m.T.size(); ++a) {
    double q = 0.0;
    for (std::size_t s = 0; s < w.size(); ++s) q += w[s] * m.R[s][a];
    if (h > 1) {
      const Mat p = joint(m, w, a);
      for (std::size_t o = 0; o < p[0].size(); ++o) {
        Vec next(w.size());
        double mass = 0.0;
        for (std::size_t s = 0; s < w.size(); ++s) mass += (next[s] = p[s][o]);
        if (mass > 0.0) q += m.gamma * unnormalized(m, next, h - 1);
      }
    }
    best = std::max(best, q);
  }
  return best;
}

}  // namespace

double value(const Model& m, const Vec& b, int horizon) { return unnormalized(m, b, horizon); }

}  // namespace oracle
