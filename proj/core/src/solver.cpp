// SPDX-License-Identifier: Apache-2.0

#include "gammasolve/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>

#include "fft.hpp"
#include "gammasolve/errors.hpp"
#include "gammasolve/parallel.hpp"

namespace gammasolve
{

namespace
{

using Eigen::MatrixXcd;
using Vec = std::vector<cplx>;

constexpr cplx I1{0.0, 1.0};

double vnorm(std::span<const cplx> x)
{
  double s = 0.0;
  for (const auto &v : x)
  {
    s += std::norm(v);
  }
  return std::sqrt(s);
}

cplx vdot(std::span<const cplx> x, std::span<const cplx> y)
{
  cplx s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
  {
    s += std::conj(x[i]) * y[i];
  }
  return s;
}

void fft(const Grid &grid, int components, std::span<const cplx> in, std::span<cplx> out,
         bool forward)
{
  detail::fft_interleaved(grid.dims(), components, in.data(), out.data(), forward);
}

std::size_t default_max_iter(std::size_t unknowns)
{
  return std::min<std::size_t>(10 * unknowns, 2000);
}

std::size_t default_restart(std::size_t unknowns)
{
  const double r = 4e6 / static_cast<double>(std::max<std::size_t>(unknowns, 1));
  return static_cast<std::size_t>(std::clamp(r, 30.0, 500.0));
}

//
// Fourier-space E-operator x -> Gamma1 F (L F^-1 x + extra), bound to one problem.
//
class EOperator
{
public:
  EOperator(const LField &L, const SpectralProjection &projection, const OperatorTerm &extra)
    : L_(L), projection_(projection), extra_(extra), c_(L.components()),
      real_(L.points() * static_cast<std::size_t>(c_)), mapped_(real_.size())
  {
  }

  void operator()(std::span<const cplx> x, std::span<cplx> y, bool adjoint = false)
  {
    const Grid &grid = L_.grid();
    fft(grid, c_, x, real_, false);
    L_.apply(real_, mapped_, adjoint);
    if (extra_)
    {
      Field e(grid, L_.layout(), Representation::real_space, real_);
      Field out(grid, L_.layout(), Representation::real_space, mapped_);
      extra_(e, out);
      std::copy(out.values().begin(), out.values().end(), mapped_.begin());
    }
    fft(grid, c_, mapped_, y, true);
    projection_.apply(y);
  }

private:
  const LField &L_;
  const SpectralProjection &projection_;
  const OperatorTerm &extra_;
  int c_;
  Vec real_;
  Vec mapped_;
};

void validate(const Problem &p)
{
  if (p.source.representation() != Representation::real_space)
  {
    throw Error(ErrorCode::representation, "source must be a real-space field");
  }
  if (!(p.source.grid() == p.L.grid()))
  {
    throw Error(ErrorCode::shape, "source and material tensor live on different grids");
  }
  if (!(p.source.layout() == p.L.layout()) || !(p.gamma.layout == p.L.layout()))
  {
    throw Error(ErrorCode::shape, "source " + p.source.layout().describe() + ", material " +
                                      p.L.layout().describe() + " and projector " +
                                      p.gamma.layout.describe() + " layouts differ");
  }
  if (p.extra && p.L.orientation() == Orientation::inverse)
  {
    throw Error(ErrorCode::invalid_argument, "extra operator terms need direct orientation");
  }
  if (!(p.options.tol > 0.0))
  {
    throw Error(ErrorCode::invalid_argument, "tolerance must be positive");
  }
}

// Givens rotation zeroing b against a: [c s; -conj(s) c] (a, b) = (r, 0).
void givens(cplx a, cplx b, double &c, cplx &s)
{
  const double na = std::abs(a);
  const double nb = std::abs(b);
  if (nb == 0.0)
  {
    c = 1.0;
    s = 0.0;
    return;
  }
  if (na == 0.0)
  {
    c = 0.0;
    s = std::conj(b) / nb;
    return;
  }
  const double denom = std::hypot(na, nb);
  c = na / denom;
  s = (a / na) * std::conj(b) / denom;
}

}  // namespace

GmresResult gmres(const LinearOperator &A, std::span<const cplx> b, double tol,
                  std::size_t max_iter, std::size_t restart)
{
  const std::size_t n = b.size();
  GmresResult result;
  result.x.assign(n, 0.0);
  result.history.push_back(1.0);
  const double bnorm = vnorm(b);
  if (bnorm == 0.0)
  {
    result.history.back() = 0.0;
    result.converged = true;
    return result;
  }
  restart = std::max<std::size_t>(1, std::min(restart, std::max<std::size_t>(max_iter, 1)));

  Vec r(b.begin(), b.end());
  Vec w(n);
  double beta = bnorm;
  double previous_cycle = 1.0;
  std::vector<Vec> V;
  MatrixXcd H;
  while (result.iterations < max_iter)
  {
    const std::size_t m = restart;
    V.assign(1, Vec(n));
    for (std::size_t i = 0; i < n; ++i)
    {
      V[0][i] = r[i] / beta;
    }
    H.setZero(m + 1, m);
    std::vector<double> cs(m);
    std::vector<cplx> sn(m);
    Eigen::VectorXcd g = Eigen::VectorXcd::Zero(m + 1);
    g(0) = beta;
    std::size_t k = 0;
    bool breakdown = false;
    while (k < m && result.iterations < max_iter)
    {
      A(V[k], w);
      const double wnorm0 = vnorm(w);
      // Modified Gram-Schmidt with one reorthogonalization pass.
      for (int pass = 0; pass < 2; ++pass)
      {
        for (std::size_t i = 0; i <= k; ++i)
        {
          const cplx h = vdot(V[i], w);
          H(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) += h;
          for (std::size_t t = 0; t < n; ++t)
          {
            w[t] -= h * V[i][t];
          }
        }
      }
      const double hnext = vnorm(w);
      const auto kk = static_cast<Eigen::Index>(k);
      H(kk + 1, kk) = hnext;
      for (Eigen::Index i = 0; i < kk; ++i)
      {
        const cplx t1 = cs[i] * H(i, kk) + sn[i] * H(i + 1, kk);
        const cplx t2 = -std::conj(sn[i]) * H(i, kk) + cs[i] * H(i + 1, kk);
        H(i, kk) = t1;
        H(i + 1, kk) = t2;
      }
      givens(H(kk, kk), H(kk + 1, kk), cs[k], sn[k]);
      H(kk, kk) = cs[k] * H(kk, kk) + sn[k] * H(kk + 1, kk);
      H(kk + 1, kk) = 0.0;
      g(kk + 1) = -std::conj(sn[k]) * g(kk);
      g(kk) = cs[k] * g(kk);
      ++k;
      ++result.iterations;
      const double rel = std::abs(g(kk + 1)) / bnorm;
      result.history.push_back(rel);
      if (hnext <= 1e-14 * std::max(wnorm0, 1e-300))
      {
        breakdown = true;
        break;
      }
      if (rel <= tol)
      {
        break;
      }
      V.emplace_back(n);
      for (std::size_t t = 0; t < n; ++t)
      {
        V.back()[t] = w[t] / hnext;
      }
    }
    // Back substitution on the triangularized Hessenberg system.
    Eigen::VectorXcd y = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(k));
    for (Eigen::Index i = static_cast<Eigen::Index>(k) - 1; i >= 0; --i)
    {
      cplx sum = g(i);
      for (Eigen::Index j = i + 1; j < static_cast<Eigen::Index>(k); ++j)
      {
        sum -= H(i, j) * y(j);
      }
      if (H(i, i) == cplx{0.0})
      {
        throw Error(ErrorCode::singular_operator,
                    "Krylov projection is singular; the operator has no inverse on its range");
      }
      y(i) = sum / H(i, i);
    }
    for (std::size_t i = 0; i < k; ++i)
    {
      const cplx yi = y(static_cast<Eigen::Index>(i));
      for (std::size_t t = 0; t < n; ++t)
      {
        result.x[t] += yi * V[i][t];
      }
    }
    // True residual.
    A(result.x, w);
    for (std::size_t t = 0; t < n; ++t)
    {
      r[t] = b[t] - w[t];
    }
    beta = vnorm(r);
    const double rel = beta / bnorm;
    result.history.back() = rel;
    if (rel <= tol)
    {
      result.converged = true;
      return result;
    }
    if (breakdown)
    {
      throw Error(ErrorCode::singular_operator,
                  "Krylov breakdown with relative residual " + format_real(rel) +
                      " above tolerance; the operator is singular on its range");
    }
    if (rel >= previous_cycle * (1.0 - 1e-12) && result.iterations < max_iter)
    {
      throw Error(ErrorCode::singular_operator,
                  "Krylov iteration stagnated at relative residual " + format_real(rel));
    }
    previous_cycle = rel;
  }
  return result;
}

SolveResult solve(const Problem &problem)
{
  validate(problem);
  const bool dual = problem.L.orientation() == Orientation::inverse;
  const Grid &grid = problem.L.grid();
  const int c = problem.L.components();
  const std::size_t n = grid.points() * static_cast<std::size_t>(c);
  const auto &opt = problem.options;

  const Projector gamma = dual ? complement(problem.gamma) : problem.gamma;
  SpectralProjection projection(gamma, grid, opt.bloch_shift, opt.symbol_cache_bytes);

  Vec source(problem.source.values().begin(), problem.source.values().end());
  if (dual)
  {
    for (auto &v : source)
    {
      v = -v;
    }
  }
  Vec b(n);
  fft(grid, c, source, b, true);
  projection.apply(b);
  const double bnorm = vnorm(b);

  SolveResult result;
  Vec x(n, 0.0);
  EOperator op(problem.L, projection, problem.extra);
  if (bnorm == 0.0)
  {
    result.converged = true;
    result.history = {0.0};
  }
  else if (opt.method == Method::krylov)
  {
    const std::size_t max_iter = opt.max_iter.value_or(default_max_iter(n));
    const std::size_t restart = opt.restart.value_or(default_restart(n));
    auto g = gmres([&](std::span<const cplx> in, std::span<cplx> out) { op(in, out); }, b,
                   opt.tol, max_iter, restart);
    x = std::move(g.x);
    result.iterations = g.iterations;
    result.history = std::move(g.history);
  }
  else
  {
    if (opt.reference == cplx{0.0})
    {
      throw Error(ErrorCode::invalid_argument, "fixed-point reference constant must be nonzero");
    }
    const std::size_t max_iter = opt.max_iter.value_or(default_max_iter(n));
    Vec ax(n);
    result.history.push_back(1.0);
    for (std::size_t it = 0; it < max_iter; ++it)
    {
      op(x, ax);
      for (std::size_t t = 0; t < n; ++t)
      {
        ax[t] = b[t] - ax[t];
      }
      const double rel = vnorm(ax) / bnorm;
      result.history.back() = rel;
      if (rel <= opt.tol)
      {
        break;
      }
      for (std::size_t t = 0; t < n; ++t)
      {
        x[t] += ax[t] / opt.reference;
      }
      ++result.iterations;
      result.history.push_back(rel);
      if (!std::isfinite(rel))
      {
        break;
      }
    }
  }

  // Assemble E and J = L E (+ extra) - s in real space.
  Field E(grid, problem.L.layout(), Representation::real_space);
  fft(grid, c, x, E.values(), false);
  Field J(grid, problem.L.layout(), Representation::real_space);
  problem.L.apply(E.values(), J.values());
  if (problem.extra)
  {
    problem.extra(E, J);
  }
  for (std::size_t t = 0; t < n; ++t)
  {
    J.values()[t] -= source[t];
  }
  if (bnorm > 0.0)
  {
    Vec jhat(n);
    fft(grid, c, J.values(), jhat, true);
    projection.apply(jhat);
    result.residual = vnorm(jhat) / bnorm;
    result.converged = result.residual <= opt.tol;
    if (!result.history.empty())
    {
      result.history.back() = result.residual;
    }
  }
  if (!E.all_finite() || !J.all_finite())
  {
    throw Error(ErrorCode::non_finite, "solution contains non-finite values");
  }
  if (dual)
  {
    result.E = std::move(J);
    result.J = std::move(E);
  }
  else
  {
    result.E = std::move(E);
    result.J = std::move(J);
  }
  return result;
}

void write_history_csv(std::ostream &out, const std::vector<double> &history)
{
  out << "iteration,residual\n";
  out.precision(17);
  for (std::size_t i = 0; i < history.size(); ++i)
  {
    out << i << ',' << history[i] << '\n';
  }
}

Field solve_resolvent(cplx z, const LField &B, const Field &f, const DSymbol &D,
                      const SolverOptions &options)
{
  if (f.representation() != Representation::real_space)
  {
    throw Error(ErrorCode::representation, "resolvent source must be a real-space field");
  }
  if (f.components() != D.potential_components || B.components() != D.field_components ||
      !(B.grid() == f.grid()))
  {
    throw Error(ErrorCode::shape, "resolvent operands have inconsistent shapes");
  }
  const Grid &grid = f.grid();
  const int pc = D.potential_components;
  const int fc = D.field_components;
  const std::size_t points = grid.points();
  const std::size_t n = points * static_cast<std::size_t>(pc);

  std::vector<MatrixXcd> symbols(points);
  parallel_for(points, [&](std::size_t begin, std::size_t end) {
    std::vector<double> k(grid.dimension());
    for (std::size_t p = begin; p < end; ++p)
    {
      grid.wavevector_of(p, k);
      for (std::size_t a = 0; a < options.bloch_shift.size() && a < k.size(); ++a)
      {
        k[a] += options.bloch_shift[a];
      }
      symbols[p] = D.evaluate(k);
    }
  });

  Vec fhat(n);
  fft(grid, pc, f.values(), fhat, true);
  Vec psi_hat(n, 0.0);

  auto min_symbol_sv = [&](const MatrixXcd &b) {
    double smallest = std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < points; ++p)
    {
      const MatrixXcd m =
          z * MatrixXcd::Identity(pc, pc) - symbols[p].adjoint() * b * symbols[p];
      Eigen::JacobiSVD<MatrixXcd> svd(m);
      smallest = std::min(smallest, svd.singularValues()(pc - 1));
    }
    return smallest;
  };

  if (B.is_uniform())
  {
    const MatrixXcd b = B.at(0);
    for (std::size_t p = 0; p < points; ++p)
    {
      const MatrixXcd m =
          z * MatrixXcd::Identity(pc, pc) - symbols[p].adjoint() * b * symbols[p];
      Eigen::JacobiSVD<MatrixXcd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
      const auto &s = svd.singularValues();
      const double scale = std::max(1.0, s(0));
      if (!(s(pc - 1) > 1e-12 * scale))
      {
        throw Error(ErrorCode::resonance,
                    "z lies on the operator spectrum; smallest singular value " +
                        format_real(s(pc - 1)));
      }
      Eigen::Map<const Eigen::VectorXcd> rhs(fhat.data() + p * pc, pc);
      Eigen::Map<Eigen::VectorXcd> out(psi_hat.data() + p * pc, pc);
      out = svd.solve(rhs);
    }
  }
  else
  {
    Vec field_hat(points * static_cast<std::size_t>(fc));
    Vec field_real(field_hat.size());
    Vec mapped(field_hat.size());
    auto apply = [&](std::span<const cplx> x, std::span<cplx> y) {
      for (std::size_t p = 0; p < points; ++p)
      {
        Eigen::Map<const Eigen::VectorXcd> xp(x.data() + p * pc, pc);
        Eigen::Map<Eigen::VectorXcd>(field_hat.data() + p * fc, fc).noalias() = symbols[p] * xp;
      }
      fft(grid, fc, field_hat, field_real, false);
      B.apply(field_real, mapped);
      fft(grid, fc, mapped, field_hat, true);
      for (std::size_t p = 0; p < points; ++p)
      {
        Eigen::Map<const Eigen::VectorXcd> xp(x.data() + p * pc, pc);
        Eigen::Map<const Eigen::VectorXcd> u(field_hat.data() + p * fc, fc);
        Eigen::Map<Eigen::VectorXcd>(y.data() + p * pc, pc).noalias() =
            z * xp - symbols[p].adjoint() * u;
      }
    };
    GmresResult g;
    try
    {
      g = gmres(apply, fhat, options.tol, options.max_iter.value_or(default_max_iter(n)),
                options.restart.value_or(default_restart(n)));
    }
    catch (const Error &e)
    {
      if (e.code() != ErrorCode::singular_operator)
      {
        throw;
      }
      g.converged = false;
    }
    if (!g.converged)
    {
      MatrixXcd mean = MatrixXcd::Zero(fc, fc);
      for (std::size_t p = 0; p < points; ++p)
      {
        mean += B.at(p);
      }
      mean /= static_cast<double>(points);
      throw Error(ErrorCode::resonance,
                  "resolvent iteration did not converge; estimated smallest singular value " +
                      format_real(min_symbol_sv(mean)));
    }
    psi_hat = std::move(g.x);
  }

  Field psi(grid, f.layout(), Representation::real_space);
  fft(grid, pc, psi_hat, psi.values(), false);
  return psi;
}

Field spectral_gradient(const Field &scalar)
{
  if (scalar.components() != 1 || scalar.representation() != Representation::real_space)
  {
    throw Error(ErrorCode::shape, "spectral_gradient expects a real-space scalar field");
  }
  const Grid &grid = scalar.grid();
  const int d = static_cast<int>(grid.dimension());
  Vec hat(grid.points());
  fft(grid, 1, scalar.values(), hat, true);
  Vec ghat(grid.points() * static_cast<std::size_t>(d));
  std::vector<double> k(grid.dimension());
  for (std::size_t p = 0; p < grid.points(); ++p)
  {
    grid.wavevector_of(p, k);
    for (int a = 0; a < d; ++a)
    {
      ghat[p * d + a] = I1 * k[a] * hat[p];
    }
  }
  Field out(grid, BlockLayout{Block::vector(d)}, Representation::real_space);
  fft(grid, d, ghat, out.values(), false);
  return out;
}

double residual_functional(const Field &psi, const Eigen::MatrixXd &A, const Field &V, double e1,
                           double e2, const Field &s)
{
  if (psi.components() != 1 || V.components() != 1 || s.components() != 1 ||
      !(psi.grid() == V.grid()) || !(psi.grid() == s.grid()))
  {
    throw Error(ErrorCode::shape, "residual_functional expects scalar fields on one grid");
  }
  const double nrm = inner_product(psi, psi).real();
  if (std::abs(nrm - 1.0) > 1e-10)
  {
    throw Error(ErrorCode::normalization, "psi must be normalized");
  }
  const Grid &grid = psi.grid();
  const int d = static_cast<int>(grid.dimension());
  if (A.rows() != d || A.cols() != d)
  {
    throw Error(ErrorCode::shape, "A must match the grid dimension");
  }
  Vec hat(grid.points());
  fft(grid, 1, psi.values(), hat, true);
  Eigen::VectorXd k(d);
  std::vector<double> kv(grid.dimension());
  for (std::size_t p = 0; p < grid.points(); ++p)
  {
    grid.wavevector_of(p, kv);
    for (int a = 0; a < d; ++a)
    {
      k(a) = kv[static_cast<std::size_t>(a)];
    }
    hat[p] *= -k.dot(A * k);
  }
  Vec lap(grid.points());
  fft(grid, 1, hat, lap, false);
  double sum = 0.0;
  for (std::size_t p = 0; p < grid.points(); ++p)
  {
    const cplx pp = lap[p] + (e1 - V(p, 0)) * psi(p, 0);
    sum += std::norm(pp - s(p, 0));
  }
  const double weight = grid.cell_volume() / static_cast<double>(grid.points());
  return sum * weight + e2 * e2 * grid.cell_volume();
}

double operator_norm_estimate(const Problem &problem, int iterations)
{
  validate(problem);
  const bool dual = problem.L.orientation() == Orientation::inverse;
  const Grid &grid = problem.L.grid();
  const std::size_t n = grid.points() * static_cast<std::size_t>(problem.L.components());
  const Projector gamma = dual ? complement(problem.gamma) : problem.gamma;
  SpectralProjection projection(gamma, grid, problem.options.bloch_shift,
                                problem.options.symbol_cache_bytes);
  EOperator op(problem.L, projection, problem.extra);

  std::mt19937_64 rng(42);
  std::normal_distribution<double> normal;
  Vec v(n);
  for (auto &x : v)
  {
    x = {normal(rng), normal(rng)};
  }
  projection.apply(v);
  double nv = vnorm(v);
  if (nv == 0.0)
  {
    return 0.0;
  }
  Vec av(n);
  Vec aav(n);
  double estimate = 0.0;
  for (int it = 0; it < iterations; ++it)
  {
    for (auto &x : v)
    {
      x /= nv;
    }
    op(v, av);
    op(av, aav, true);
    projection.apply(aav);
    nv = vnorm(aav);
    estimate = std::sqrt(nv);
    if (nv == 0.0)
    {
      return 0.0;
    }
    v.swap(aav);
  }
  return estimate;
}

}  // namespace gammasolve
