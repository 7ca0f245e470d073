#pragma once

// Lowest-Landau-level bosons: the effective Hamiltonian
//
//     H = (1 - |Omega|) L_N + 8 pi a Delta_N,   Delta_N = sum_{i<j} delta_ij,
//
// on symmetric analytic functions of z_1..z_N, square-integrable against
// prod_i exp(-beta |z_i|^2). The pair operator acts as
//
//     (delta_12 f)(z1, z2) = (2 pi)^{-3/2} f((z1 + z2)/2, (z1 + z2)/2).
//
// L_N and Delta_N commute, so everything is done block by block at fixed
// total angular momentum L. A block's basis is the set of partitions of L
// into at most N parts (symmetrised monomials), orthonormalised with the
// Bargmann norms; Delta_N is then real symmetric.
//
// The spectrum of Delta_N does not depend on beta (the map f -> f(w, w) is
// fixed, and within one L block all monomial norms carry the same power of
// beta). beta only changes the norms reported by bargmann_norms().

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "coldgas/errors.hpp"

namespace coldgas::lll {

class SizeLimit : public Error {
 public:
  explicit SizeLimit(const std::string& m) : Error("lll_ed", "SizeLimit", m) {}
};

class NotConverged : public Error {
 public:
  explicit NotConverged(const std::string& m) : Error("lll_ed", "NotConverged", m) {}
};

/// (2 pi)^{-3/2}: delta_12 acting on a constant.
double delta_unit();

/// Measure exponent used unless a caller overrides it: the printed weight
/// exp(-|z|^2 / 4).
inline constexpr double kDefaultBeta = 0.25;

/// 2e5, or the value of COLDGAS_SIZE_CAP when set to a positive integer.
std::size_t default_size_cap();

/// Number of partitions of L into at most N parts (dynamic programming).
std::uint64_t partition_count(int N, int L);

/// A symmetrised monomial m_lambda, stored as its parts lambda_1 >= ... >=
/// lambda_N >= 0 (zero-padded to N).
struct BasisState {
  std::vector<int> parts;

  /// occupation[m] = number of particles in mode z^m, m = 0..max part.
  std::vector<int> occupations() const;
  int particles() const { return static_cast<int>(parts.size()); }
  int angular_momentum() const;
  bool operator==(const BasisState&) const = default;
};

struct Basis {
  int N = 0;
  int L = 0;
  std::vector<BasisState> states;  // decreasing lexicographic order of parts

  std::size_t size() const { return states.size(); }
  /// Index of a state given its (zero-padded, sorted) parts, or npos.
  std::size_t index_of(const std::vector<int>& parts) const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

/// All partitions of L into at most N parts. Throws SizeLimit when the count
/// exceeds `size_cap`.
Basis enumerate_basis(int N, int L, std::size_t size_cap = default_size_cap());

/// ||z^m||^2 = pi m! / beta^{m+1}.
double single_mode_norm_sq(int m, double beta);

struct BargmannNorm {
  double multiplicity = 0.0;  // N! / prod_m n_m!: distinct monomials in m_lambda
  double log_norm_sq = 0.0;   // log ||m_lambda||^2
  double norm() const;
};

std::vector<BargmannNorm> bargmann_norms(const Basis& basis, double beta = kDefaultBeta);

struct DeltaBlock {
  Basis basis;
  /// Delta_N in the orthonormalised basis m_lambda / ||m_lambda||.
  Eigen::SparseMatrix<double> matrix;
};

/// Builds the block by applying the pair operator literally to monomials
/// (binomial expansion of ((z_i + z_j)/2)^s) and summing over particle pairs.
DeltaBlock delta_matrix(int N, int L, double beta = kDefaultBeta,
                        std::size_t size_cap = default_size_cap());

struct EigenOptions {
  std::size_t dense_limit = 2000;     // above this, restarted Lanczos
  double degeneracy_tol = 1e-10;
  double lanczos_tol = 1e-11;
};

struct YrastPoint {
  int N = 0;
  int L = 0;
  std::size_t dim = 0;
  double delta_min = 0.0;  // in absolute units; includes (2 pi)^{-3/2}
  Eigen::VectorXd ground_vector;
  int degeneracy = 0;
};

YrastPoint yrast(int N, int L, EigenOptions opts = {}, std::size_t size_cap = default_size_cap());

/// Yrast points for L = 0..L_max.
std::vector<YrastPoint> yrast_table(int N, int L_max, EigenOptions opts = {},
                                    std::size_t size_cap = default_size_cap());

/// (2 pi)^{-3/2} * { N(N-1)/2 for L in {0,1}; N(N-1-L/2)/2 for 2 <= L <= N;
/// 0 for L >= N(N-1) }, absent in between.
std::optional<double> yrast_closed_form(int N, int L);

/// Coefficients of prod_{i<j} (z_i - z_j)^2 on the symmetrised monomials of
/// the L = N(N-1) basis (coefficient of the monomial z^lambda itself).
std::vector<std::int64_t> laughlin_coefficients(const Basis& basis);

struct LaughlinResult {
  int N = 0;
  int L = 0;
  std::size_t dim = 0;
  double residual = 0.0;  // ||Delta_N psi|| / ||psi||
  Eigen::VectorXd vector;  // normalised, orthonormal-basis coordinates
};

LaughlinResult laughlin_residual(int N, std::size_t size_cap = default_size_cap());

struct HLLLScanRow {
  double kappa = 0.0;  // (1 - |Omega|) / (8 pi a)
  int L_star = 0;
  double E0 = 0.0;     // ground energy in units of 8 pi a
};

/// E0(kappa) = min_L [kappa L + Delta_N(L)] over the supplied yrast table,
/// ties (within 1e-12) resolved to the smallest L.
std::vector<HLLLScanRow> hll_ground_scan(const std::vector<YrastPoint>& table,
                                         const std::vector<double>& kappa_grid);

/// Same, computing the table for L = 0..N(N-1) first.
std::vector<HLLLScanRow> hll_ground_scan(int N, const std::vector<double>& kappa_grid,
                                         EigenOptions opts = {});

/// Vertices (by L) of the lower convex hull of {(L, Delta_N(L))}, collinear
/// points excluded, in increasing L.
std::vector<int> hull_vertices(const std::vector<YrastPoint>& table);

/// kappa values where L_star jumps: minus the slope of each hull edge,
/// aligned with hull_vertices (entry i is the edge from vertex i to i+1).
std::vector<double> hull_breakpoints(const std::vector<YrastPoint>& table);

struct LLLGPResult {
  double energy = 0.0;  // (1/2) <f x f | delta_12 | f x f>
  /// f = sum_m b_m z^m / ||z^m||: coordinates in the orthonormal mode basis.
  std::vector<std::complex<double>> mode_coefficients;
  double norm_sq = 0.0;           // sum |b_m|^2
  double angular_momentum = 0.0;  // sum m |b_m|^2
  int iterations = 0;
  bool converged = false;
};

struct LLLGPOptions {
  double tol = 1e-9;      // projected-gradient norm, relative to the energy scale
  int max_iter = 20000;
  int restarts = 8;
  std::uint64_t seed = 0;
};

/// Minimises the quartic mean-field form over single-mode functions with
/// ||f||^2 = N_weight and <f|z d/dz|f> = L_target, using modes m < M_modes.
/// Throws NotConverged if no restart reaches the tolerance.
LLLGPResult lll_gp_minimize(double N_weight, double L_target, int M_modes, LLLGPOptions opts = {});

}  // namespace coldgas::lll
