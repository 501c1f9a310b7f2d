#include "swaplab/lpp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <gmpxx.h>

#include "swaplab/errors.hpp"
#include "swaplab/rng.hpp"

namespace swaplab {

LppField::LppField(int b_max, int c_max, std::vector<double> weights, FieldProvenance provenance,
                   std::int64_t base_color)
    : b_max_(b_max),
      c_max_(c_max),
      weights_(std::move(weights)),
      provenance_(provenance),
      base_color_(base_color) {
  if (b_max < 1 || c_max < 1) throw ConfigError("LPP field needs positive dimensions");
  if (b_max > kMaxDim || c_max > kMaxDim) throw ResourceError("LPP field exceeds desk-scale cap");
  if (weights_.size() != static_cast<std::size_t>(b_max) * static_cast<std::size_t>(c_max)) {
    throw ConfigError("LPP weight count does not match dimensions");
  }
  for (double w : weights_) {
    if (!(w >= 0.0)) throw InvariantError("LPP weights must be nonnegative");
  }
}

double LppField::operator()(int b, int c) const {
  if (!contains({b, c})) throw DomainError("LPP field index out of range");
  return weights_[static_cast<std::size_t>(b - 1) * static_cast<std::size_t>(c_max_) +
                  static_cast<std::size_t>(c - 1)];
}

std::string LppField::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "B,C,weight\n";
  for (int b = 1; b <= b_max_; ++b) {
    for (int c = 1; c <= c_max_; ++c) os << b << ',' << c << ',' << (*this)(b, c) << '\n';
  }
  return os.str();
}

LppField sample_field(std::uint64_t seed, int b_max, int c_max) {
  if (b_max < 1 || c_max < 1) throw ConfigError("LPP field needs positive dimensions");
  CounterRng rng(derive_key(seed, 0x1BB));
  std::vector<double> w(static_cast<std::size_t>(b_max) * static_cast<std::size_t>(c_max));
  for (double& x : w) x = rng.exponential();
  return LppField(b_max, c_max, std::move(w), FieldProvenance::Sampled);
}

namespace {

void check_pair(const LppField& field, LatticePoint u, LatticePoint v) {
  if (!field.contains(u) || !field.contains(v)) throw DomainError("LPP endpoint outside field");
  if (!u.leq(v)) throw DomainError("LPP endpoints must satisfy u <= v coordinate-wise");
}

}  // namespace

std::vector<double> passage_grid(const LppField& field, LatticePoint u, LatticePoint v) {
  check_pair(field, u, v);
  const int nb = v.b - u.b + 1;
  const int nc = v.c - u.c + 1;
  std::vector<double> g(static_cast<std::size_t>(nb) * static_cast<std::size_t>(nc));
  for (int i = 0; i < nb; ++i) {
    for (int j = 0; j < nc; ++j) {
      double best = 0.0;
      if (i > 0) best = g[static_cast<std::size_t>(i - 1) * nc + j];
      if (j > 0) best = std::max(best, g[static_cast<std::size_t>(i) * nc + j - 1]);
      g[static_cast<std::size_t>(i) * nc + j] = best + field(u.b + i, u.c + j);
    }
  }
  return g;
}

double passage_time(const LppField& field, LatticePoint u, LatticePoint v) {
  return passage_grid(field, u, v).back();
}

PassageTimeTable passage_table(const LppField& field, std::int64_t base_color) {
  return PassageTimeTable(base_color, field.b_max(), field.c_max(),
                          passage_grid(field, {1, 1}, {field.b_max(), field.c_max()}));
}

Geodesic geodesic(const LppField& field, LatticePoint u, LatticePoint v) {
  const std::vector<double> g = passage_grid(field, u, v);
  const int nc = v.c - u.c + 1;
  auto at = [&](int i, int j) { return g[static_cast<std::size_t>(i) * nc + j]; };
  Geodesic out{u, v, {}};
  int i = v.b - u.b;
  int j = v.c - u.c;
  out.path.push_back(v);
  while (i > 0 || j > 0) {
    if (i == 0) {
      --j;
    } else if (j == 0) {
      --i;
    } else {
      const double left = at(i - 1, j);
      const double down = at(i, j - 1);
      if (left == down) {
        throw TieError("geodesic tie at (" + std::to_string(u.b + i) + ", " +
                       std::to_string(u.c + j) + ")");
      }
      if (left > down) {
        --i;
      } else {
        --j;
      }
    }
    out.path.push_back({u.b + i, u.c + j});
  }
  std::reverse(out.path.begin(), out.path.end());
  return out;
}

std::string Geodesic::to_csv() const {
  std::ostringstream os;
  os << "B,C\n";
  for (const auto& p : path) os << p.b << ',' << p.c << '\n';
  return os.str();
}

LppField extract_weight_field(const PassageTimeTable& table) {
  std::vector<double> w;
  w.reserve(table.values().size());
  for (int b = 1; b <= table.b_max(); ++b) {
    for (int c = 1; c <= table.c_max(); ++c) {
      const double prev = std::max(table.at(b - 1, c), table.at(b, c - 1));
      const double here = table.at(b, c);
      if (here < prev) {
        throw InvariantError("passage table not monotone at (" + std::to_string(b) + ", " +
                             std::to_string(c) + ")");
      }
      w.push_back(here - prev);
    }
  }
  return LppField(table.b_max(), table.c_max(), std::move(w), FieldProvenance::ExtractedFromTasep,
                  table.base_color());
}

bool extraction_roundtrip_exact(const PassageTimeTable& table) {
  const int bm = table.b_max();
  const int cm = table.c_max();
  auto idx = [cm](int b, int c) { return static_cast<std::size_t>(b) * static_cast<std::size_t>(cm + 1) + static_cast<std::size_t>(c); };
  std::vector<mpq_class> t((static_cast<std::size_t>(bm) + 1) * static_cast<std::size_t>(cm + 1));
  std::vector<mpq_class> w(t.size());
  for (int b = 1; b <= bm; ++b)
    for (int c = 1; c <= cm; ++c) t[idx(b, c)] = mpq_class(table.at(b, c));
  for (int b = 1; b <= bm; ++b) {
    for (int c = 1; c <= cm; ++c) {
      const mpq_class& prev = std::max(t[idx(b - 1, c)], t[idx(b, c - 1)]);
      w[idx(b, c)] = t[idx(b, c)] - prev;
      if (sgn(w[idx(b, c)]) < 0) return false;
    }
  }
  std::vector<mpq_class> back(t.size());
  for (int b = 1; b <= bm; ++b) {
    for (int c = 1; c <= cm; ++c) {
      back[idx(b, c)] = std::max(back[idx(b - 1, c)], back[idx(b, c - 1)]) + w[idx(b, c)];
      if (back[idx(b, c)] != t[idx(b, c)]) return false;
    }
  }
  return true;
}

double extraction_roundtrip_error(const PassageTimeTable& table) {
  const PassageTimeTable back = passage_table(extract_weight_field(table), table.base_color());
  double worst = 0.0;
  for (int b = 1; b <= table.b_max(); ++b)
    for (int c = 1; c <= table.c_max(); ++c)
      worst = std::max(worst, std::abs(back.at(b, c) - table.at(b, c)) / table.at(b, c));
  return worst;
}

ShiftCouplingState shift_couple(const LppField& field, std::uint64_t fresh_key) {
  return shift_couple(field, fresh_key, field.b_max() - 1, field.c_max() - 1);
}

ShiftCouplingState shift_couple(const LppField& field, std::uint64_t fresh_key, int b_out,
                                int c_out) {
  const int b_in = field.b_max();
  const int c_in = field.c_max();
  if (b_out < 1 || c_out < 1 || b_out > b_in - 1 || c_out > c_in - 1) {
    throw TruncationError("shift coupling output " + std::to_string(b_out) + "x" +
                          std::to_string(c_out) + " needs an input of at least " +
                          std::to_string(b_out + 1) + "x" + std::to_string(c_out + 1));
  }
  const PassageTimeTable L = passage_table(field, field.base_color());
  auto fresh = [&](int i, int j) {
    const auto counter = static_cast<std::uint64_t>(i) * 0x100000000ULL + static_cast<std::uint64_t>(j);
    return -std::log(CounterRng::to_open_unit(CounterRng::at(fresh_key, counter)));
  };

  ShiftCouplingState st;
  constexpr int kBeyond = std::numeric_limits<int>::max();
  st.pi.assign(static_cast<std::size_t>(b_out) + 1, kBeyond);
  st.jump_times.assign(static_cast<std::size_t>(b_out) + 1, std::numeric_limits<double>::infinity());
  st.pi[0] = 1;
  st.jump_times[0] = 0.0;

  for (int i = 0; i < b_out; ++i) {
    if (st.escaped_at) break;
    // The colour-(A+1) particle, sitting as hole i+1 of mu^A, waits for its
    // (i+1)-th jump; particle j of mu^A may overtake it first.
    bool found = false;
    for (int j = st.pi[static_cast<std::size_t>(i)]; j <= c_in; ++j) {
      const double start = std::max(L.at(i + 2, j - 1), st.jump_times[static_cast<std::size_t>(i)]);
      const double e = fresh(i + 1, j);
      if (L.at(i + 1, j) - start >= e) {
        st.pi[static_cast<std::size_t>(i) + 1] = j;
        st.jump_times[static_cast<std::size_t>(i) + 1] = start + e;
        found = true;
        break;
      }
    }
    if (!found) st.escaped_at = i + 1;
  }

  PassageTimeTable next(field.base_color() + 1, b_out, c_out);
  for (int b = 1; b <= b_out; ++b) {
    const int p = st.pi[static_cast<std::size_t>(b)];
    for (int c = 1; c <= c_out; ++c) {
      double t;
      if (c > p) {
        t = L.at(b, c - 1);
      } else if (c < p) {
        t = L.at(b + 1, c);
      } else {
        t = st.jump_times[static_cast<std::size_t>(b)];
      }
      next.set(b, c, t);
    }
  }
  LppField w = extract_weight_field(next);
  st.next_field = LppField(b_out, c_out, std::vector<double>(w.weights().begin(), w.weights().end()),
                           FieldProvenance::ShiftCoupled, field.base_color() + 1);
  st.next_table = std::move(next);
  return st;
}

}  // namespace swaplab
