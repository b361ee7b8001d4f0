// SPDX-License-Identifier: Apache-2.0

#include "gammasolve/fermionic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "fft.hpp"
#include "gammasolve/errors.hpp"
#include "gammasolve/parallel.hpp"

namespace gammasolve
{

namespace
{

using Eigen::MatrixXcd;

constexpr double tail_tolerance = 1e-10;

void require_scalar(const Field &f, const MultiElectronGrid &g)
{
  if (f.components() != 1 || !(f.grid() == g.grid()))
  {
    throw Error(ErrorCode::shape, "expected a scalar field on the configuration grid");
  }
}

void require_vector(const Field &f, const MultiElectronGrid &g)
{
  if (f.components() != g.spatial_dimension() || !(f.grid() == g.grid()))
  {
    throw Error(ErrorCode::shape, "expected a vector(N d) field on the configuration grid");
  }
}

std::vector<int> inverse(const std::vector<int> &slots)
{
  std::vector<int> inv(slots.size());
  for (std::size_t s = 0; s < slots.size(); ++s)
  {
    inv[static_cast<std::size_t>(slots[s])] = static_cast<int>(s);
  }
  return inv;
}

// sum_t weight_t * sign_t * (phi o pi_t), scalar fields.
Field combine(const Field &phi, const MultiElectronGrid &g, const std::vector<Permutation> &terms,
              double weight)
{
  Field out(phi.grid(), phi.layout(), phi.representation());
  for (const auto &t : terms)
  {
    const auto table = exchange_table(g, t.slots);
    const double w = weight * t.sign;
    auto o = out.values();
    const auto in = phi.values();
    for (std::size_t p = 0; p < table.size(); ++p)
    {
      o[p] += w * in[table[p]];
    }
  }
  return out;
}

// One vector term: out_m += w * p_{source(m)}(x o pi).
struct VectorTerm
{
  int target;
  int source;
  std::vector<int> slots;
  int sign;
};

Field combine_vector(const Field &p, const MultiElectronGrid &g,
                     const std::vector<VectorTerm> &terms, double weight)
{
  Field out(p.grid(), p.layout(), p.representation());
  const int d = g.d_space;
  for (const auto &t : terms)
  {
    const auto table = exchange_table(g, t.slots);
    const double w = weight * t.sign;
    for (std::size_t q = 0; q < table.size(); ++q)
    {
      for (int a = 0; a < d; ++a)
      {
        out(q, t.target * d + a) += w * p(table[q], t.source * d + a);
      }
    }
  }
  return out;
}

std::vector<VectorTerm> vector_terms_from_group(int n)
{
  std::vector<VectorTerm> terms;
  for (const auto &perm : all_permutations(n))
  {
    const auto inv = inverse(perm.slots);
    for (int m = 0; m < n; ++m)
    {
      terms.push_back({m, inv[static_cast<std::size_t>(m)], perm.slots, perm.sign});
    }
  }
  return terms;
}

// Explicit three-electron term list: target, source block, argument order, sign.
std::vector<VectorTerm> three_electron_terms()
{
  const auto T = [](int target, int source, std::vector<int> args, int sign) {
    for (auto &a : args)
    {
      a -= 1;
    }
    return VectorTerm{target - 1, source - 1, std::move(args), sign};
  };
  return {
      T(1, 1, {1, 2, 3}, +1), T(1, 1, {1, 3, 2}, -1), T(1, 2, {2, 1, 3}, -1),
      T(1, 2, {3, 1, 2}, +1), T(1, 3, {3, 2, 1}, -1), T(1, 3, {2, 3, 1}, +1),
      T(2, 2, {1, 2, 3}, +1), T(2, 2, {3, 2, 1}, -1), T(2, 1, {2, 1, 3}, -1),
      T(2, 1, {2, 3, 1}, +1), T(2, 3, {1, 3, 2}, -1), T(2, 3, {3, 1, 2}, +1),
      T(3, 3, {1, 2, 3}, +1), T(3, 3, {2, 1, 3}, -1), T(3, 1, {3, 2, 1}, -1),
      T(3, 1, {3, 1, 2}, +1), T(3, 2, {1, 3, 2}, -1), T(3, 2, {2, 3, 1}, +1),
  };
}

std::vector<VectorTerm> two_electron_terms()
{
  return {
      {0, 0, {0, 1}, +1},
      {0, 1, {1, 0}, -1},
      {1, 1, {0, 1}, +1},
      {1, 0, {1, 0}, -1},
  };
}

double max_abs(std::span<const cplx> v)
{
  double m = 0.0;
  for (const auto &x : v)
  {
    m = std::max(m, std::abs(x));
  }
  return m;
}

std::vector<int> transposition(int n, int i, int j)
{
  std::vector<int> slots(static_cast<std::size_t>(n));
  std::iota(slots.begin(), slots.end(), 0);
  std::swap(slots[static_cast<std::size_t>(i)], slots[static_cast<std::size_t>(j)]);
  return slots;
}

// Antisymmetrizes over permutations of electrons 3..N only.
Field antisymmetrize_tail(const Field &phi, const MultiElectronGrid &g)
{
  const int n = g.electrons;
  if (n <= 3)
  {
    return phi;
  }
  std::vector<Permutation> terms;
  for (const auto &tail : all_permutations(n - 2))
  {
    Permutation p{{0, 1}, tail.sign};
    for (int s : tail.slots)
    {
      p.slots.push_back(s + 2);
    }
    terms.push_back(std::move(p));
  }
  return combine(phi, g, terms, 1.0 / static_cast<double>(terms.size()));
}

Field split_block(const Field &f, int offset, const BlockLayout &layout)
{
  Field out(f.grid(), layout, f.representation());
  const int c = layout.total_components();
  for (std::size_t p = 0; p < f.points(); ++p)
  {
    for (int i = 0; i < c; ++i)
    {
      out(p, i) = f(p, offset + i);
    }
  }
  return out;
}

}  // namespace

Grid MultiElectronGrid::grid() const
{
  if (electrons < 2 || electrons > 8 || d_space < 1 || d_space > 3)
  {
    throw Error(ErrorCode::invalid_argument, "unsupported electron count or spatial dimension");
  }
  std::vector<std::size_t> dims;
  std::vector<double> lengths;
  if (spin)
  {
    dims.assign(static_cast<std::size_t>(electrons), 2);
    lengths.assign(static_cast<std::size_t>(electrons), 2.0);
  }
  for (int a = 0; a < electrons * d_space; ++a)
  {
    dims.push_back(points_per_axis);
    lengths.push_back(length);
  }
  return Grid(dims, lengths);
}

int parity(const std::vector<int> &slots)
{
  int inversions = 0;
  for (std::size_t i = 0; i < slots.size(); ++i)
  {
    for (std::size_t j = i + 1; j < slots.size(); ++j)
    {
      inversions += slots[i] > slots[j] ? 1 : 0;
    }
  }
  return inversions % 2 == 0 ? 1 : -1;
}

std::vector<Permutation> all_permutations(int n)
{
  std::vector<int> slots(static_cast<std::size_t>(n));
  std::iota(slots.begin(), slots.end(), 0);
  std::vector<Permutation> out;
  do
  {
    out.push_back({slots, parity(slots)});
  } while (std::next_permutation(slots.begin(), slots.end()));
  return out;
}

std::vector<std::size_t> exchange_table(const MultiElectronGrid &g, const std::vector<int> &slots)
{
  const int n = g.electrons;
  if (static_cast<int>(slots.size()) != n)
  {
    throw Error(ErrorCode::shape, "permutation size does not match the electron count");
  }
  const Grid grid = g.grid();
  const std::size_t spin_axes = g.spin ? static_cast<std::size_t>(n) : 0;
  const auto d = static_cast<std::size_t>(g.d_space);
  std::vector<std::size_t> table(grid.points());
  parallel_for(grid.points(), [&](std::size_t begin, std::size_t end) {
    std::vector<std::size_t> target(grid.dimension());
    for (std::size_t p = begin; p < end; ++p)
    {
      const auto index = grid.unravel(p);
      for (std::size_t s = 0; s < static_cast<std::size_t>(n); ++s)
      {
        const auto e = static_cast<std::size_t>(slots[s]);
        if (g.spin)
        {
          target[s] = index[e];
        }
        for (std::size_t a = 0; a < d; ++a)
        {
          target[spin_axes + s * d + a] = index[spin_axes + e * d + a];
        }
      }
      table[p] = grid.ravel(target);
    }
  });
  return table;
}

Field compose(const Field &phi, const MultiElectronGrid &g, const std::vector<int> &slots)
{
  require_scalar(phi, g);
  return combine(phi, g, {{slots, 1}}, 1.0);
}

Field antisymmetrize_full(const Field &phi, const MultiElectronGrid &g)
{
  require_scalar(phi, g);
  if (g.electrons > 4)
  {
    throw Error(ErrorCode::guard, "brute-force antisymmetrization is capped at N! <= 24");
  }
  const auto perms = all_permutations(g.electrons);
  return combine(phi, g, perms, 1.0 / static_cast<double>(perms.size()));
}

Field lambda_a(const Field &phi, const MultiElectronGrid &g, bool assume_tail_symmetry)
{
  require_scalar(phi, g);
  const int n = g.electrons;
  Field tail = phi;
  if (assume_tail_symmetry)
  {
    const double scale = std::max(1.0, max_abs(phi.values()));
    for (int i = 2; i + 1 < n; ++i)
    {
      const Field swapped = compose(phi, g, transposition(n, i, i + 1));
      double defect = 0.0;
      for (std::size_t p = 0; p < phi.points(); ++p)
      {
        defect = std::max(defect, std::abs(swapped(p, 0) + phi(p, 0)));
      }
      if (defect > tail_tolerance * scale)
      {
        throw Error(ErrorCode::precondition, "input is not antisymmetric in electrons " +
                                                 std::to_string(i + 1) + " and " +
                                                 std::to_string(i + 2));
      }
    }
  }
  else
  {
    tail = antisymmetrize_tail(phi, g);
  }

  // Antisymmetrize the leading pair, then insert pairs.
  const Field lead = combine(tail, g, {{transposition(n, 0, 0), 1}, {transposition(n, 0, 1), -1}}, 0.5);

  // Electron labels are 0-based below; the sign exponents use 1-based i, l.
  std::vector<Permutation> terms;
  std::vector<int> identity(static_cast<std::size_t>(n));
  std::iota(identity.begin(), identity.end(), 0);
  terms.push_back({identity, 1});
  auto rest = [n](std::vector<int> head, std::initializer_list<int> skip) {
    for (int e = 0; e < n; ++e)
    {
      if (std::find(head.begin(), head.end(), e) == head.end() &&
          std::find(skip.begin(), skip.end(), e) == skip.end())
      {
        head.push_back(e);
      }
    }
    return head;
  };
  for (int i = 3; i <= n; ++i)
  {
    const int s = (i + 1) % 2 == 0 ? 1 : -1;
    terms.push_back({rest({1, i - 1, 0}, {}), s});
    terms.push_back({rest({0, i - 1, 1}, {}), -s});
  }
  for (int i = 3; i <= n; ++i)
  {
    for (int l = i + 1; l <= n; ++l)
    {
      const int s = (i + l + 1) % 2 == 0 ? 1 : -1;
      terms.push_back({rest({i - 1, l - 1, 0, 1}, {}), s});
    }
  }
  return combine(lead, g, terms, 2.0 / (n * (n - 1.0)));
}

Field lambda_A(const Field &p, const MultiElectronGrid &g)
{
  require_vector(p, g);
  switch (g.electrons)
  {
    case 2:
      return combine_vector(p, g, two_electron_terms(), 0.5);
    case 3:
      return combine_vector(p, g, three_electron_terms(), 1.0 / 6.0);
    case 4:
      return antisymmetrize_vector_full(p, g);
    default:
      throw Error(ErrorCode::invalid_argument, "lambda_A supports 2 to 4 electrons");
  }
}

Field antisymmetrize_vector_full(const Field &p, const MultiElectronGrid &g)
{
  require_vector(p, g);
  if (g.electrons > 4)
  {
    throw Error(ErrorCode::guard, "brute-force antisymmetrization is capped at N! <= 24");
  }
  const auto terms = vector_terms_from_group(g.electrons);
  double count = 1.0;
  for (int i = 2; i <= g.electrons; ++i)
  {
    count *= i;
  }
  return combine_vector(p, g, terms, 1.0 / count);
}

double scalar_symmetry_defect(const Field &phi, const MultiElectronGrid &g)
{
  require_scalar(phi, g);
  double defect = 0.0;
  for (int i = 0; i < g.electrons; ++i)
  {
    for (int j = i + 1; j < g.electrons; ++j)
    {
      const auto table = exchange_table(g, transposition(g.electrons, i, j));
      for (std::size_t p = 0; p < table.size(); ++p)
      {
        defect = std::max(defect, std::abs(phi(p, 0) + phi(table[p], 0)));
      }
    }
  }
  return defect;
}

double vector_symmetry_defect(const Field &q, const MultiElectronGrid &g)
{
  require_vector(q, g);
  const int d = g.d_space;
  double defect = 0.0;
  for (int j = 0; j < g.electrons; ++j)
  {
    for (int k = j + 1; k < g.electrons; ++k)
    {
      const auto table = exchange_table(g, transposition(g.electrons, j, k));
      for (std::size_t p = 0; p < table.size(); ++p)
      {
        for (int a = 0; a < d; ++a)
        {
          // q_j(x) = -q_k(x with j, k exchanged), and the mirror statement.
          defect = std::max(defect, std::abs(q(p, j * d + a) + q(table[p], k * d + a)));
          defect = std::max(defect, std::abs(q(p, k * d + a) + q(table[p], j * d + a)));
          for (int m = 0; m < g.electrons; ++m)
          {
            if (m != j && m != k)
            {
              defect = std::max(defect, std::abs(q(p, m * d + a) + q(table[p], m * d + a)));
            }
          }
        }
      }
    }
  }
  return defect;
}

std::function<Field(const Field &)> symmetrized_L(const LField &LD, const MultiElectronGrid &g)
{
  const int nd = g.spatial_dimension();
  const BlockLayout layout{Block::vector(nd), Block::scalar()};
  if (!(LD.layout() == layout) || !(LD.grid() == g.grid()))
  {
    throw Error(ErrorCode::shape, "desymmetrized L must have layout (vector(N d), scalar)");
  }
  return [LD, g, nd, layout](const Field &E) {
    if (!(E.layout() == layout))
    {
      throw Error(ErrorCode::shape, "field layout does not match the desymmetrized L");
    }
    const Field J = LD.apply(E);
    const Field vec = lambda_A(split_block(J, 0, BlockLayout{Block::vector(nd)}), g);
    const Field sca = lambda_a(split_block(J, nd, BlockLayout{Block::scalar()}), g, false);
    Field out(J.grid(), layout, Representation::real_space);
    for (std::size_t p = 0; p < out.points(); ++p)
    {
      for (int a = 0; a < nd; ++a)
      {
        out(p, a) = vec(p, a);
      }
      out(p, nd) = sca(p, 0);
    }
    return out;
  };
}

double pair_scale(int electrons)
{
  return electrons * (electrons - 1) / 2.0;
}

Field normalize(const Field &psi)
{
  const double nrm = norm(psi);
  if (!(nrm > 0.0))
  {
    throw Error(ErrorCode::normalization, "cannot normalize a zero field");
  }
  std::size_t arg = 0;
  double best = -1.0;
  const auto v = psi.values();
  for (std::size_t i = 0; i < v.size(); ++i)
  {
    if (std::abs(v[i]) > best * (1.0 + 1e-12))
    {
      best = std::abs(v[i]);
      arg = i;
    }
  }
  const cplx phase = std::conj(v[arg]) / std::abs(v[arg]);
  Field out = scale(phase / nrm, psi);
  // Remove rounding in the reference component so the convention holds exactly.
  out.values()[arg] = std::abs(out.values()[arg]);
  return out;
}

double perturbation_energy(const Field &psi, const Field &dV)
{
  if (psi.components() != 1 || dV.components() != 1 || !(psi.grid() == dV.grid()))
  {
    throw Error(ErrorCode::shape, "perturbation_energy expects scalar fields on one grid");
  }
  if (std::abs(inner_product(psi, psi).real() - 1.0) > 1e-10)
  {
    throw Error(ErrorCode::normalization, "psi must be normalized");
  }
  cplx sum = 0.0;
  for (std::size_t p = 0; p < psi.points(); ++p)
  {
    sum += std::norm(psi(p, 0)) * dV(p, 0);
  }
  sum *= psi.grid().cell_volume() / static_cast<double>(psi.points());
  return sum.real();
}

MatrixXcd dense_hamiltonian(const Grid &grid, const Eigen::MatrixXd &A, const Field &V)
{
  const auto n = static_cast<Eigen::Index>(grid.points());
  const int d = static_cast<int>(grid.dimension());
  // Columns of F are transforms of unit vectors.
  MatrixXcd F(n, n);
  std::vector<cplx> unit(grid.points());
  std::vector<cplx> col(grid.points());
  for (Eigen::Index j = 0; j < n; ++j)
  {
    std::fill(unit.begin(), unit.end(), cplx{0.0});
    unit[static_cast<std::size_t>(j)] = 1.0;
    detail::fft_interleaved(grid.dims(), 1, unit.data(), col.data(), true);
    F.col(j) = Eigen::Map<Eigen::VectorXcd>(col.data(), n);
  }
  Eigen::VectorXd kinetic(n);
  std::vector<double> k(grid.dimension());
  Eigen::VectorXd kv(d);
  for (Eigen::Index p = 0; p < n; ++p)
  {
    grid.wavevector_of(static_cast<std::size_t>(p), k);
    for (int a = 0; a < d; ++a)
    {
      kv(a) = k[static_cast<std::size_t>(a)];
    }
    kinetic(p) = kv.dot(A * kv);
  }
  MatrixXcd H = F.adjoint() * kinetic.cast<cplx>().asDiagonal() * F;
  for (Eigen::Index p = 0; p < n; ++p)
  {
    H(p, p) += V(static_cast<std::size_t>(p), 0);
  }
  return H;
}

namespace
{

void require_isolated(const Eigen::VectorXd &ev, double energy)
{
  Eigen::Index nearest = 0;
  (ev.array() - energy).abs().minCoeff(&nearest);
  double gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < ev.size(); ++i)
  {
    if (i != nearest)
    {
      gap = std::min(gap, std::abs(ev(i) - ev(nearest)));
    }
  }
  if (!(gap > 1e-8))
  {
    throw Error(ErrorCode::degeneracy,
                "energy " + format_real(energy) + " is degenerate (gap " + format_real(gap) + ")");
  }
}

void require_scalar_pair(const Field &psi, const Field &V)
{
  if (psi.components() != 1 || V.components() != 1 || !(V.grid() == psi.grid()))
  {
    throw Error(ErrorCode::shape, "perturbation_solve expects scalar fields on one grid");
  }
}

PerturbationResult deflated_solve(const Field &psi, double energy, const Field &dV,
                                  const Eigen::MatrixXd &A, const Field &V,
                                  const SolverOptions &options);

}  // namespace

PerturbationResult perturbation_solve(const Field &psi, double energy, const Field &dV,
                                      const Eigen::MatrixXd &A, const Field &V,
                                      const SolverOptions &options)
{
  require_scalar_pair(psi, V);
  if (psi.grid().points() <= 2048)
  {
    const Eigen::SelfAdjointEigenSolver<MatrixXcd> eig(dense_hamiltonian(psi.grid(), A, V),
                                                       Eigen::EigenvaluesOnly);
    require_isolated(eig.eigenvalues(), energy);
  }
  return deflated_solve(psi, energy, dV, A, V, options);
}

PerturbationResult perturbation_solve(const Field &psi, double energy, const Field &dV,
                                      const Eigen::MatrixXd &A, const Field &V,
                                      const MultiElectronGrid &g, const SolverOptions &options)
{
  require_scalar_pair(psi, V);
  require_scalar(psi, g);
  if (scalar_symmetry_defect(psi, g) > 1e-10 * std::max(1.0, max_abs(psi.values())))
  {
    throw Error(ErrorCode::precondition, "psi is not antisymmetric under electron exchange");
  }
  if (psi.grid().points() <= 4096)
  {
    std::vector<double> energies;
    for (const Eigenpair &e : antisymmetric_eigenpairs(g, A, V))
    {
      energies.push_back(e.energy);
    }
    require_isolated(Eigen::Map<const Eigen::VectorXd>(energies.data(),
                                                       static_cast<Eigen::Index>(energies.size())),
                     energy);
  }
  PerturbationResult r = deflated_solve(psi, energy, dV, A, V, options);
  r.psi1 = lambda_a(r.psi1, g, false);
  r.orthogonality = 2.0 * std::abs(inner_product(psi, r.psi1).real());
  return r;
}

Eigen::MatrixXd antisymmetric_basis(const MultiElectronGrid &g)
{
  if (g.electrons > 4)
  {
    throw Error(ErrorCode::guard, "antisymmetric basis is capped at N! <= 24");
  }
  const std::vector<Permutation> perms = all_permutations(g.electrons);
  std::vector<std::vector<std::size_t>> tables;
  for (const Permutation &p : perms)
  {
    tables.push_back(exchange_table(g, p.slots));
  }
  const std::size_t n = g.grid().points();
  const double w = 1.0 / std::sqrt(static_cast<double>(perms.size()));
  std::vector<char> seen(n, 0);
  std::vector<std::size_t> reps;
  for (std::size_t p = 0; p < n; ++p)
  {
    if (seen[p])
    {
      continue;
    }
    std::vector<std::size_t> orbit;
    for (const auto &t : tables)
    {
      seen[t[p]] = 1;
      orbit.push_back(t[p]);
    }
    std::sort(orbit.begin(), orbit.end());
    // Coincident electrons shrink the orbit and force a zero amplitude.
    if (std::adjacent_find(orbit.begin(), orbit.end()) == orbit.end())
    {
      reps.push_back(p);
    }
  }
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                            static_cast<Eigen::Index>(reps.size()));
  for (std::size_t c = 0; c < reps.size(); ++c)
  {
    for (std::size_t k = 0; k < perms.size(); ++k)
    {
      Q(static_cast<Eigen::Index>(tables[k][reps[c]]), static_cast<Eigen::Index>(c)) =
          perms[k].sign * w;
    }
  }
  return Q;
}

std::vector<Eigenpair> antisymmetric_eigenpairs(const MultiElectronGrid &g,
                                                const Eigen::MatrixXd &A, const Field &V)
{
  const Grid grid = g.grid();
  if (grid.points() > 4096)
  {
    throw Error(ErrorCode::guard, "dense eigensolve is capped at 4096 configuration points");
  }
  const Eigen::MatrixXd Q = antisymmetric_basis(g);
  const MatrixXcd Qc = Q.cast<cplx>();
  const MatrixXcd H = Qc.adjoint() * dense_hamiltonian(grid, A, V) * Qc;
  const Eigen::SelfAdjointEigenSolver<MatrixXcd> eig(H);
  std::vector<Eigenpair> out;
  for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i)
  {
    const Eigen::VectorXcd v = Qc * eig.eigenvectors().col(i);
    out.push_back({eig.eigenvalues()(i),
                   normalize(Field(grid, BlockLayout{Block::scalar()}, Representation::real_space,
                                   std::vector<cplx>(v.data(), v.data() + v.size())))});
  }
  return out;
}

namespace
{

PerturbationResult deflated_solve(const Field &psi, double energy, const Field &dV,
                                  const Eigen::MatrixXd &A, const Field &V,
                                  const SolverOptions &options)
{
  const Grid &grid = psi.grid();
  const double e1 = perturbation_energy(psi, dV);

  const int d = static_cast<int>(grid.dimension());
  SchrodingerSpec spec;
  spec.A = A;
  spec.potential = Table<cplx>{std::vector<cplx>(V.values().begin(), V.values().end())};
  spec.energy = energy;
  const BlockLayout layout{Block::vector(d), Block::scalar()};
  Field source(grid, layout, Representation::real_space);
  for (std::size_t p = 0; p < grid.points(); ++p)
  {
    source(p, d) = (dV(p, 0) - e1) * psi(p, 0);
  }
  const double weight = grid.cell_volume() / static_cast<double>(grid.points());
  Problem problem{build_schrodinger(spec, grid), schrodinger_projector(d), source, options,
                  // Rank-one deflation: subtract psi <psi, psi1> from the scalar flux.
                  [&psi, d, weight](const Field &E, Field &out) {
                    cplx overlap = 0.0;
                    for (std::size_t p = 0; p < E.points(); ++p)
                    {
                      overlap += std::conj(psi(p, 0)) * E(p, d);
                    }
                    overlap *= weight;
                    for (std::size_t p = 0; p < E.points(); ++p)
                    {
                      out(p, d) -= psi(p, 0) * overlap;
                    }
                  }};
  PerturbationResult result;
  result.energy1 = e1;
  result.solve = solve(problem);
  if (!result.solve.converged)
  {
    throw Error(ErrorCode::not_converged, "perturbation solve did not converge (residual " +
                                              format_real(result.solve.residual) + ")");
  }
  result.psi1 = split_block(result.solve.E, d, BlockLayout{Block::scalar()});
  const cplx overlap = inner_product(psi, result.psi1);
  for (std::size_t p = 0; p < grid.points(); ++p)
  {
    result.psi1(p, 0) -= overlap * psi(p, 0);
  }
  result.orthogonality = 2.0 * std::abs(inner_product(psi, result.psi1).real());
  return result;
}

}  // namespace

}  // namespace gammasolve
