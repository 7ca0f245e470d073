#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <sstream>

#include "coldgas/lll.hpp"
#include "lll_internal.hpp"

namespace coldgas::lll {

namespace detail {

double log_factorial(int m) {
  static const std::vector<double> table = [] {
    std::vector<double> t(4096);
    long double acc = 0.0L;
    t[0] = 0.0;
    for (std::size_t k = 1; k < t.size(); ++k) {
      acc += std::log(static_cast<long double>(k));
      t[k] = static_cast<double>(acc);
    }
    return t;
  }();
  if (m < 0 || static_cast<std::size_t>(m) >= table.size()) {
    throw DomainError("lll_ed", "factorial argument out of range");
  }
  return table[static_cast<std::size_t>(m)];
}

double half_binomial(int s, int k) {
  if (k < 0 || k > s) return 0.0;
  // Pascal's rule on C(s,k)/2^s: each step averages two neighbours.
  static const std::vector<std::vector<double>> rows = [] {
    std::vector<std::vector<double>> r(1024);
    r[0] = {1.0};
    for (std::size_t n = 1; n < r.size(); ++n) {
      r[n].assign(n + 1, 0.0);
      for (std::size_t j = 0; j <= n; ++j) {
        const double left = j > 0 ? r[n - 1][j - 1] : 0.0;
        const double right = j < n ? r[n - 1][j] : 0.0;
        r[n][j] = 0.5 * (left + right);
      }
    }
    return r;
  }();
  if (static_cast<std::size_t>(s) >= rows.size()) {
    throw DomainError("lll_ed", "binomial order out of range");
  }
  return rows[static_cast<std::size_t>(s)][static_cast<std::size_t>(k)];
}

}  // namespace detail

double delta_unit() {
  static const double v = std::pow(2.0 * std::numbers::pi, -1.5);
  return v;
}

std::size_t default_size_cap() {
  if (const char* env = std::getenv("COLDGAS_SIZE_CAP")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return 200000;
}

std::uint64_t partition_count(int N, int L) {
  if (N < 0 || L < 0) throw DomainError("lll_ed", "N and L must be >= 0");
  // Partitions of L into at most N parts = partitions of L with parts <= N.
  std::vector<std::uint64_t> ways(static_cast<std::size_t>(L) + 1, 0);
  ways[0] = 1;
  for (int part = 1; part <= N; ++part) {
    for (int s = part; s <= L; ++s) {
      if (__builtin_add_overflow(ways[s], ways[s - part], &ways[s])) {
        throw SizeLimit("partition count overflows 64 bits");
      }
    }
  }
  return ways[L];
}

std::vector<int> BasisState::occupations() const {
  const int top = parts.empty() ? 0 : parts.front();
  std::vector<int> occ(static_cast<std::size_t>(top) + 1, 0);
  for (int p : parts) ++occ[p];
  return occ;
}

int BasisState::angular_momentum() const {
  int s = 0;
  for (int p : parts) s += p;
  return s;
}

std::size_t Basis::index_of(const std::vector<int>& parts) const {
  auto it = std::lower_bound(states.begin(), states.end(), parts,
                             [](const BasisState& s, const std::vector<int>& p) {
                               return s.parts > p;  // decreasing order
                             });
  if (it == states.end() || it->parts != parts) return npos;
  return static_cast<std::size_t>(it - states.begin());
}

Basis enumerate_basis(int N, int L, std::size_t size_cap) {
  if (N < 1) throw DomainError("lll_ed", "N must be >= 1");
  if (L < 0) throw DomainError("lll_ed", "L must be >= 0");
  const std::uint64_t count = partition_count(N, L);
  if (count > size_cap) {
    std::ostringstream os;
    os << "basis for N=" << N << ", L=" << L << " has " << count << " states (cap " << size_cap
       << ")";
    throw SizeLimit(os.str());
  }

  Basis basis;
  basis.N = N;
  basis.L = L;
  basis.states.reserve(count);
  std::vector<int> parts(static_cast<std::size_t>(N), 0);

  std::function<void(int, int, int)> fill = [&](int slot, int remaining, int max_part) {
    if (slot == N) {
      if (remaining == 0) basis.states.push_back({parts});
      return;
    }
    const int slots_left = N - slot;
    const int lo = (remaining + slots_left - 1) / slots_left;
    for (int p = std::min(max_part, remaining); p >= lo; --p) {
      parts[slot] = p;
      fill(slot + 1, remaining - p, p);
    }
    parts[slot] = 0;
  };
  fill(0, L, L);
  return basis;
}

double single_mode_norm_sq(int m, double beta) {
  if (!(beta > 0.0)) throw DomainError("lll_ed", "beta must be > 0");
  return std::numbers::pi * std::exp(detail::log_factorial(m) - (m + 1.0) * std::log(beta));
}

double BargmannNorm::norm() const { return std::exp(0.5 * log_norm_sq); }

std::vector<BargmannNorm> bargmann_norms(const Basis& basis, double beta) {
  if (!(beta > 0.0)) throw DomainError("lll_ed", "beta must be > 0");
  const double log_beta = std::log(beta);
  const double log_pi = std::log(std::numbers::pi);
  std::vector<BargmannNorm> out;
  out.reserve(basis.size());
  for (const auto& st : basis.states) {
    double log_mult = detail::log_factorial(basis.N);
    for (int n : st.occupations()) log_mult -= detail::log_factorial(n);
    double log_norm = log_mult;
    for (int p : st.parts) log_norm += log_pi + detail::log_factorial(p) - (p + 1.0) * log_beta;
    out.push_back({std::round(std::exp(log_mult)), log_norm});
  }
  return out;
}

}  // namespace coldgas::lll
