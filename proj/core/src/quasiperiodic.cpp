// SPDX-License-Identifier: Apache-2.0

#include "gammasolve/quasiperiodic.hpp"

#include <atomic>
#include <mutex>
#include <string>
#include <thread>

#include "gammasolve/errors.hpp"
#include "gammasolve/parallel.hpp"

namespace gammasolve
{

QuasiSource::QuasiSource(std::vector<double> k0, Eigen::VectorXcd s0, Field alpha)
  : k0_(std::move(k0)), s0_(std::move(s0)), alpha_(std::move(alpha))
{
  if (alpha_.components() != 1 || alpha_.representation() != Representation::real_space)
  {
    throw Error(ErrorCode::shape, "alpha must be a real-space scalar field");
  }
  if (k0_.size() != alpha_.grid().dimension())
  {
    throw Error(ErrorCode::shape, "k0 must match the grid dimension");
  }
  const cplx mean = field_mean(alpha_)(0);
  for (auto &v : alpha_.values())
  {
    v -= mean;
  }
}

Field QuasiSource::periodic_source(const BlockLayout &layout) const
{
  if (s0_.size() != layout.total_components())
  {
    throw Error(ErrorCode::shape, "s0 does not match the field layout");
  }
  Field s(alpha_.grid(), layout, Representation::real_space);
  const int c = layout.total_components();
  for (std::size_t p = 0; p < s.points(); ++p)
  {
    const cplx factor = 1.0 + alpha_(p, 0);
    for (int i = 0; i < c; ++i)
    {
      s(p, i) = s0_(i) * factor;
    }
  }
  return s;
}

QuasiResult solve_quasiperiodic(const LField &L, const Projector &gamma, const QuasiSource &q,
                                const SolverOptions &options)
{
  Problem problem{L, gamma, q.periodic_source(L.layout()), options, {}};
  problem.options.bloch_shift = q.k0();
  QuasiResult out;
  out.solve = solve(problem);
  if (!out.solve.converged)
  {
    throw Error(ErrorCode::resonance,
                "quasiperiodic solve did not converge (residual " +
                    format_real(out.solve.residual) +
                    "); k0 and omega are likely close to the dispersion relation");
  }
  out.E0 = field_mean(out.solve.E);
  out.J0 = field_mean(out.solve.J);
  out.E_fluct = out.solve.E;
  out.J_fluct = out.solve.J;
  const int c = L.components();
  for (std::size_t p = 0; p < L.points(); ++p)
  {
    for (int i = 0; i < c; ++i)
    {
      out.E_fluct(p, i) -= out.E0(i);
      out.J_fluct(p, i) -= out.J0(i);
    }
  }
  return out;
}

EffectiveTensors effective_tensors(const LField &L, const Projector &gamma,
                                   const std::vector<double> &k0, const Field &alpha,
                                   const SolverOptions &options)
{
  const int c = L.components();
  EffectiveTensors result;
  result.k0 = k0;
  result.LE = Eigen::MatrixXcd::Zero(c, c);
  result.LJ = Eigen::MatrixXcd::Zero(c, c);

  std::vector<std::string> failures(static_cast<std::size_t>(c));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int j = next++; j < c; j = next++)
    {
      try
      {
        const QuasiSource q(k0, Eigen::VectorXcd::Unit(c, j), alpha);
        const auto r = solve_quasiperiodic(L, gamma, q, options);
        result.LE.col(j) = r.E0;
        result.LJ.col(j) = r.J0;
      }
      catch (const std::exception &e)
      {
        failures[static_cast<std::size_t>(j)] = e.what();
      }
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(max_threads(), static_cast<unsigned>(c)));
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 1; w < workers; ++w)
    {
      pool.emplace_back(worker);
    }
    worker();
  }
  std::string failed;
  for (int j = 0; j < c; ++j)
  {
    if (!failures[static_cast<std::size_t>(j)].empty())
    {
      failed += (failed.empty() ? "" : "; ") + std::string("column ") + std::to_string(j) + ": " +
                failures[static_cast<std::size_t>(j)];
    }
  }
  if (!failed.empty())
  {
    throw Error(ErrorCode::partial_result, "effective tensor columns failed: " + failed);
  }
  return result;
}

}  // namespace gammasolve
