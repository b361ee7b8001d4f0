// SPDX-License-Identifier: Apache-2.0

#include "gammasolve/models.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <string>
#include <thread>

#include "gammasolve/errors.hpp"
#include "gammasolve/parallel.hpp"
#include "gammasolve/physics.hpp"
#include "gammasolve/projectors.hpp"

namespace gammasolve
{

namespace
{

void validate(const ResonatorSpec &r)
{
  if (!(r.bar_mass > 0.0) || r.cavities < 1 || !(r.hidden_mass > 0.0) || !(r.spring.real() > 0.0))
  {
    throw Error(ErrorCode::invalid_argument,
                "resonator needs M0 > 0, n >= 1, m > 0 and Re K > 0");
  }
}

void validate(const LoveProfile &p, double omega)
{
  if (!(p.thickness > 0.0) || !(p.mu1 > 0.0) || !(p.rho1 > 0.0) || !(p.mu2 > 0.0) ||
      !(p.rho2 > 0.0))
  {
    throw Error(ErrorCode::invalid_argument, "layer parameters must be positive");
  }
  if (!(omega > 0.0))
  {
    throw Error(ErrorCode::frequency, "Love waves need omega > 0");
  }
}

struct Relation
{
  double g = 0.0;
  double scale = 1.0;
};

Relation relation(const LoveProfile &p, double omega, double k1)
{
  const double q1 = std::sqrt(std::max(0.0, omega * omega * p.rho1 / p.mu1 - k1 * k1));
  const double q2 = std::sqrt(std::max(0.0, k1 * k1 - omega * omega * p.rho2 / p.mu2));
  const double a = p.mu1 * q1;
  const double b = p.mu2 * q2;
  return {a * std::sin(q1 * p.thickness) - b * std::cos(q1 * p.thickness),
          std::max(a + b, 1e-300)};
}

// Fraction of [x - dx/2, x + dx/2] inside [lo, hi].
double overlap(double x, double dx, double lo, double hi)
{
  const double a = std::max(x - 0.5 * dx, lo);
  const double b = std::min(x + 0.5 * dx, hi);
  return std::max(0.0, b - a) / dx;
}

// Runs body(i) for i in [0, n) on up to max_threads() workers; rethrows the first failure.
template <typename Body>
void for_each_sample(std::size_t n, Body body)
{
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (std::size_t i = next++; i < n && !failed; i = next++)
    {
      try
      {
        body(i);
      }
      catch (...)
      {
        if (!failed.exchange(true))
        {
          failure = std::current_exception();
        }
      }
    }
  };
  const unsigned workers =
      std::max(1u, std::min<unsigned>(max_threads(), static_cast<unsigned>(n)));
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 1; w < workers; ++w)
    {
      pool.emplace_back(worker);
    }
    worker();
  }
  if (failure)
  {
    std::rethrow_exception(failure);
  }
}

struct LoveCell
{
  Grid grid;
  ScalarParam mu;
  ScalarParam rho;
  Field source;
};

LoveCell love_cell(const LoveProfile &p, const LoveScanOptions &o)
{
  if (o.points < 16 || !(o.cell_factor > 2.0))
  {
    throw Error(ErrorCode::invalid_argument, "scan grid needs >= 16 points and a cell wider than 2h");
  }
  const double h = p.thickness;
  const double length = o.cell_factor * h;
  Grid grid({o.points}, {length});
  const double dx = length / static_cast<double>(o.points);
  if (2.0 * h / dx < 16.0)
  {
    throw Error(ErrorCode::invalid_argument, "scan grid must resolve the layer with >= 16 points");
  }
  const double lo = 0.5 * length - h;
  const double hi = 0.5 * length + h;
  const double width = 0.25 * h;
  const cplx damp{1.0, o.loss};
  Table<cplx> mu;
  Table<cplx> rho;
  Field source(grid, BlockLayout{Block::vector(1), Block::scalar()});
  for (std::size_t i = 0; i < o.points; ++i)
  {
    const double x = grid.position(i)[0];
    const double f = overlap(x, dx, lo, hi);
    mu.values.push_back(damp / (f / p.mu1 + (1.0 - f) / p.mu2));
    rho.values.push_back(f * p.rho1 + (1.0 - f) * p.rho2);
    const double a = (x - lo) / width;
    const double b = (x - hi) / width;
    source(i, 1) = std::exp(-0.5 * a * a) + std::exp(-0.5 * b * b);
  }
  return {std::move(grid), std::move(mu), std::move(rho), std::move(source)};
}

double response_at(const LoveCell &cell, double omega, double k1, const LoveScanOptions &o)
{
  LoveSpec spec;
  spec.omega = omega;
  spec.k1 = k1;
  spec.mu = cell.mu;
  spec.rho = cell.rho;
  Problem problem{build_love(spec, cell.grid), love_projector(), cell.source, {}, {}};
  const std::size_t unknowns = cell.source.size();
  problem.options.tol = o.solver_tol;
  problem.options.restart = unknowns;
  problem.options.max_iter = 2 * unknowns;
  const SolveResult r = solve(problem);
  return norm(r.E) / norm(cell.source);
}

}  // namespace

cplx effective_mass(cplx omega, const ResonatorSpec &r)
{
  validate(r);
  const cplx spring = std::conj(r.spring);
  const cplx denom = 2.0 * spring - r.hidden_mass * omega * omega;
  if (std::abs(denom) <= 1e-14 * std::abs(2.0 * spring))
  {
    throw Error(ErrorCode::pole, "effective mass has a pole at omega* = " +
                                     format_real(resonance_frequency(r)));
  }
  return r.bar_mass + 2.0 * spring * static_cast<double>(r.cavities) * r.hidden_mass / denom;
}

double resonance_frequency(const ResonatorSpec &r)
{
  validate(r);
  return std::sqrt(2.0 * r.spring.real() / r.hidden_mass);
}

Eigen::MatrixXcd build_resonator_density(cplx omega, const std::vector<ResonatorSpec> &axes,
                                         double volume)
{
  if (axes.empty() || !(volume > 0.0))
  {
    throw Error(ErrorCode::invalid_argument, "density needs at least one axis and volume > 0");
  }
  const auto d = static_cast<Eigen::Index>(axes.size());
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(d, d);
  for (Eigen::Index a = 0; a < d; ++a)
  {
    rho(a, a) = effective_mass(omega, axes[static_cast<std::size_t>(a)]) / volume;
  }
  return rho;
}

std::pair<double, double> love_window(const LoveProfile &p, double omega)
{
  validate(p, omega);
  return {omega * std::sqrt(p.rho2 / p.mu2), omega * std::sqrt(p.rho1 / p.mu1)};
}

double love_relation_residual(const LoveProfile &p, double omega, double k1)
{
  validate(p, omega);
  const Relation r = relation(p, omega, k1);
  return r.g / r.scale;
}

std::vector<double> love_dispersion_roots(const LoveProfile &p, double omega)
{
  const auto [lo, hi] = love_window(p, omega);
  std::vector<double> roots;
  if (!(hi > lo))
  {
    return roots;
  }
  // Sign changes of G are separated by at least a quarter period of sin(q1 h) in q1.
  const double q1max = std::sqrt(omega * omega * p.rho1 / p.mu1 - lo * lo);
  const std::size_t samples =
      std::max<std::size_t>(2000, static_cast<std::size_t>(200.0 * q1max * p.thickness));
  auto g = [&](double k) { return love_relation_residual(p, omega, k); };
  double a = lo;
  double ga = g(a);
  for (std::size_t i = 1; i <= samples; ++i)
  {
    const double b = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(samples);
    const double gb = g(b);
    if (ga == 0.0 && i > 1)
    {
      roots.push_back(a);
    }
    else if (ga * gb < 0.0)
    {
      double x0 = a;
      double x1 = b;
      double g0 = ga;
      while (x1 - x0 > 1e-14 * x1)
      {
        const double m = 0.5 * (x0 + x1);
        const double gm = g(m);
        if (gm == 0.0)
        {
          x0 = x1 = m;
          break;
        }
        if ((gm < 0.0) == (g0 < 0.0))
        {
          x0 = m;
          g0 = gm;
        }
        else
        {
          x1 = m;
        }
      }
      roots.push_back(0.5 * (x0 + x1));
    }
    a = b;
    ga = gb;
  }
  return roots;
}

double love_response(const LoveProfile &p, double omega, double k1, const LoveScanOptions &o)
{
  validate(p, omega);
  return response_at(love_cell(p, o), omega, k1, o);
}

LoveScanResult love_resonance_scan(const LoveProfile &p, double omega, const LoveScanOptions &o)
{
  validate(p, omega);
  if (o.samples < 3)
  {
    throw Error(ErrorCode::invalid_argument, "scan needs at least 3 samples");
  }
  std::pair<double, double> range;
  if (o.k_range)
  {
    range = *o.k_range;
  }
  else
  {
    const auto [lo, hi] = love_window(p, omega);
    range = {lo + 0.01 * (hi - lo), hi - 0.01 * (hi - lo)};
  }
  if (!(range.second > range.first) || !(range.first >= 0.0))
  {
    throw Error(ErrorCode::invalid_argument, "scan range is empty");
  }
  const LoveCell cell = love_cell(p, o);

  LoveScanResult result;
  result.loss = o.loss;
  result.k.resize(o.samples);
  result.response.resize(o.samples);
  for (std::size_t i = 0; i < o.samples; ++i)
  {
    result.k[i] = range.first + (range.second - range.first) * static_cast<double>(i) /
                                    static_cast<double>(o.samples - 1);
  }
  for_each_sample(o.samples, [&](std::size_t i) {
    result.response[i] = response_at(cell, omega, result.k[i], o);
  });

  // Largest-k local maximum, else the global maximum.
  const auto &r = result.response;
  std::size_t best = static_cast<std::size_t>(std::max_element(r.begin(), r.end()) - r.begin());
  for (std::size_t i = o.samples - 2; i >= 1; --i)
  {
    if (r[i] >= r[i - 1] && r[i] >= r[i + 1])
    {
      best = i;
      break;
    }
  }
  double a = result.k[best == 0 ? 0 : best - 1];
  double b = result.k[std::min(best + 1, o.samples - 1)];
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - phi * (b - a);
  double d = a + phi * (b - a);
  double fc = response_at(cell, omega, c, o);
  double fd = response_at(cell, omega, d, o);
  while (b - a > o.refine_tol * std::abs(b))
  {
    if (fc > fd)
    {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = response_at(cell, omega, c, o);
    }
    else
    {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = response_at(cell, omega, d, o);
    }
  }
  result.peak = 0.5 * (a + b);
  result.peak_response = std::max(fc, fd);
  return result;
}

}  // namespace gammasolve
