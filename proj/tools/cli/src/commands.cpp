// SPDX-License-Identifier: Apache-2.0

#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "config.hpp"
#include "gammasolve/errors.hpp"
#include "gammasolve/fermionic.hpp"
#include "gammasolve/models.hpp"
#include "gammasolve/quasiperiodic.hpp"
#include "gammasolve/uplf.hpp"
#include "gammasolve_verify/verify.hpp"

namespace gammasolve::cli
{

namespace
{

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::filesystem::path output_dir(const CommonOptions &o,
                                 const std::optional<std::filesystem::path> &configured)
{
  std::filesystem::path dir = o.out ? *o.out : configured ? *configured : ".";
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec)
  {
    throw Error(ErrorCode::io, "cannot create output directory " + dir.string());
  }
  return dir;
}

void write_text(const std::filesystem::path &path, const std::string &text)
{
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out)
  {
    throw Error(ErrorCode::io, "cannot write " + path.string());
  }
}

void write_history(const std::filesystem::path &path, const std::vector<double> &history)
{
  std::ostringstream s;
  write_history_csv(s, history);
  write_text(path, s.str());
}

json complex_matrix(const Eigen::MatrixXcd &m)
{
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
  {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
    {
      row.push_back({m(r, c).real(), m(r, c).imag()});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

RunConfig load(const CommonOptions &o)
{
  if (o.config.empty())
  {
    throw Error(ErrorCode::config, "--config is required");
  }
  if (!std::filesystem::exists(o.config))
  {
    throw Error(ErrorCode::io, "config file " + o.config.string() + " does not exist");
  }
  RunConfig c = load_config(o.config);
  if (o.tol)
  {
    if (!(*o.tol > 0.0))
    {
      throw Error(ErrorCode::config, "--tol must be positive");
    }
    c.solver.tol = *o.tol;
  }
  return c;
}

std::tuple<double, double, std::size_t> parse_scan(const std::string &scan)
{
  double a = 0.0;
  double b = 0.0;
  long n = 0;
  char c1 = 0;
  char c2 = 0;
  std::istringstream in(scan);
  if (!(in >> a >> c1 >> b >> c2 >> n) || c1 != ':' || c2 != ':' || n < 2 || !(in >> std::ws).eof())
  {
    throw Error(ErrorCode::config, "--scan expects start:stop:steps with steps >= 2");
  }
  return {a, b, static_cast<std::size_t>(n)};
}

}  // namespace

int run_solve(const CommonOptions &o, std::ostream &log)
{
  const auto t0 = Clock::now();
  const RunConfig c = load(o);
  const std::filesystem::path dir = output_dir(o, c.output);
  Problem problem{build(c.material, c.grid), projector_for(c.material, c.grid), {}, c.solver, {}};
  problem.source = build_source(c, problem.L.layout());
  const double assemble = seconds_since(t0);

  const auto t1 = Clock::now();
  const SolveResult r = solve(problem);
  const double solve_time = seconds_since(t1);

  write_uplf(dir / "E.uplf", r.E);
  write_uplf(dir / "J.uplf", r.J);
  write_history(dir / "history.csv", r.history);
  json summary = {{"physics", c.physics},
                  {"residual", r.residual},
                  {"iterations", r.iterations},
                  {"converged", r.converged},
                  {"tol", c.solver.tol},
                  {"timings",
                   {{"assemble_s", assemble}, {"solve_s", solve_time}, {"total_s", seconds_since(t0)}}}};
  write_text(dir / "summary.json", summary.dump(2) + "\n");
  log << (r.converged ? "converged" : "not converged") << " after " << r.iterations
      << " iterations, residual " << r.residual << "\n";
  return r.converged ? exit_ok : exit_failed;
}

int run_effective(const CommonOptions &o, std::ostream &log)
{
  const RunConfig c = load(o);
  if (!c.bloch)
  {
    throw Error(ErrorCode::config, "$.bloch: required by the effective command");
  }
  const std::filesystem::path dir = output_dir(o, c.output);
  const LField L = build(c.material, c.grid);
  const Field alpha = sample_scalar(c.bloch->alpha, c.grid);
  const EffectiveTensors t =
      effective_tensors(L, projector_for(c.material, c.grid), c.bloch->k0, alpha, c.solver);
  json out = {{"physics", c.physics},
              {"omega", {c.omega.real(), c.omega.imag()}},
              {"k0", c.bloch->k0},
              {"LE", complex_matrix(t.LE)},
              {"LJ", complex_matrix(t.LJ)}};
  write_text(dir / "effective.json", out.dump(2) + "\n");
  log << "effective tensors written to " << (dir / "effective.json").string() << "\n";
  return exit_ok;
}

int run_schrodinger(const CommonOptions &o, std::ostream &log)
{
  if (!std::filesystem::exists(o.config))
  {
    throw Error(ErrorCode::io, "config file " + o.config.string() + " does not exist");
  }
  std::ifstream in(o.config, std::ios::binary);
  std::ostringstream text;
  text << in.rdbuf();
  SchrodingerConfig c = parse_schrodinger_config(text.str(), o.config.parent_path());
  if (o.tol)
  {
    c.solver.tol = *o.tol;
  }
  if (c.grid.points() > 4096)
  {
    throw Error(ErrorCode::invalid_argument, "the schrodinger command needs <= 4096 grid points");
  }
  const std::filesystem::path dir = output_dir(o, std::nullopt);
  const Field V = total_potential(c);
  const Field dV = sample_scalar(c.perturbation, c.grid);
  const MultiElectronGrid sector{c.electrons, c.d_space, c.grid.dims()[0], c.grid.lengths()[0],
                                 false};

  std::vector<Eigenpair> pairs;
  if (c.electrons > 1)
  {
    pairs = antisymmetric_eigenpairs(sector, c.A, V);
  }
  else
  {
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(dense_hamiltonian(c.grid, c.A, V));
    for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i)
    {
      const Eigen::VectorXcd v = eig.eigenvectors().col(i);
      pairs.push_back({eig.eigenvalues()(i),
                       normalize(Field(c.grid, BlockLayout{Block::scalar()},
                                       Representation::real_space,
                                       std::vector<cplx>(v.data(), v.data() + v.size())))});
    }
  }
  std::size_t pick = static_cast<std::size_t>(c.state);
  if (c.energy)
  {
    const auto nearest = std::min_element(pairs.begin(), pairs.end(), [&](const auto &a, const auto &b) {
      return std::abs(a.energy - *c.energy) < std::abs(b.energy - *c.energy);
    });
    pick = static_cast<std::size_t>(nearest - pairs.begin());
  }
  if (pick >= pairs.size())
  {
    throw Error(ErrorCode::config, "$.state: the antisymmetric sector holds only " +
                                       std::to_string(pairs.size()) + " states");
  }
  const Field &psi = pairs[pick].psi;
  const double energy = pairs[pick].energy;
  const PerturbationResult r = c.electrons > 1
                                   ? perturbation_solve(psi, energy, dV, c.A, V, sector, c.solver)
                                   : perturbation_solve(psi, energy, dV, c.A, V, c.solver);
  write_uplf(dir / "psi.uplf", psi);
  write_uplf(dir / "psi1.uplf", r.psi1);
  write_history(dir / "history.csv", r.solve.history);
  json summary = {{"electrons", c.electrons},
                  {"d_space", c.d_space},
                  {"state", pick},
                  {"energy", energy},
                  {"energy1", r.energy1},
                  {"orthogonality", r.orthogonality},
                  {"residual", r.solve.residual},
                  {"iterations", r.solve.iterations},
                  {"converged", r.solve.converged}};
  if (c.energy)
  {
    summary["requested_energy"] = *c.energy;
  }
  write_text(dir / "summary.json", summary.dump(2) + "\n");
  log << "E = " << energy << ", E' = " << r.energy1 << "\n";
  return exit_ok;
}

int run_project(const ProjectOptions &o, std::ostream &log)
{
  const Field in = read_uplf(o.input);
  const int d = static_cast<int>(in.grid().dimension());
  Projector gamma;
  if (o.projector == "helmholtz")
    gamma = helmholtz_projector(d);
  else if (o.projector == "maxwell")
    gamma = maxwell_projector();
  else if (o.projector == "brinkman")
    gamma = brinkman_projector();
  else if (o.projector == "elastic")
    gamma = elastic_projector(d);
  else if (o.projector == "thermoacoustic")
    gamma = thermoacoustic_projector();
  else if (o.projector == "schrodinger")
    gamma = schrodinger_projector(d);
  else if (o.projector == "love")
    gamma = love_projector();
  else
    throw Error(ErrorCode::config, "unknown projector '" + o.projector + "'");
  if (o.complement)
  {
    gamma = complement(gamma);
  }
  const bool real = in.representation() == Representation::real_space;
  Field out = apply_projector(gamma, real ? to_fourier(in) : in);
  if (real)
  {
    out = to_real(out);
  }
  write_uplf(o.output, out);
  log << "wrote " << o.output.string() << "\n";
  return exit_ok;
}

int run_dispersion(const DispersionOptions &o, const std::optional<std::filesystem::path> &out,
                   std::ostream &csv_out, std::ostream &log)
{
  const auto [start, stop, steps] = parse_scan(o.scan);
  std::ostringstream csv;
  csv.precision(17);
  if (o.model == "effmass")
  {
    const ResonatorSpec r{o.bar_mass, o.cavities, o.hidden_mass, cplx{o.spring_re, o.spring_im}};
    log << "resonance at omega* = " << resonance_frequency(r) << "\n";
    csv << "omega,re,im\n";
    for (std::size_t i = 0; i < steps; ++i)
    {
      const double w = start + (stop - start) * static_cast<double>(i) / static_cast<double>(steps - 1);
      try
      {
        const cplx m = effective_mass(w, r);
        csv << w << "," << m.real() << "," << m.imag() << "\n";
      }
      catch (const Error &e)
      {
        if (e.code() != ErrorCode::pole)
        {
          throw;
        }
        csv << w << ",nan,nan\n";
      }
    }
  }
  else if (o.model == "love")
  {
    const LoveProfile p{o.thickness, o.mu1, o.rho1, o.mu2, o.rho2};
    for (const double k : love_dispersion_roots(p, o.omega))
    {
      log << "dispersion root k1 = " << k << "\n";
    }
    LoveScanOptions so;
    so.points = o.points;
    so.samples = steps;
    so.k_range = std::pair{start, stop};
    const LoveScanResult s = love_resonance_scan(p, o.omega, so);
    log << "response peak at k1 = " << s.peak << " (loss " << s.loss << ")\n";
    csv << "k1,response\n";
    for (std::size_t i = 0; i < s.k.size(); ++i)
    {
      csv << s.k[i] << "," << s.response[i] << "\n";
    }
  }
  else
  {
    throw Error(ErrorCode::config, "--model expects effmass or love");
  }
  if (out)
  {
    std::filesystem::create_directories(*out);
    write_text(*out / "dispersion.csv", csv.str());
  }
  else
  {
    csv_out << csv.str();
  }
  return exit_ok;
}

int run_verify(std::uint64_t seed, std::ostream &out)
{
  const auto t0 = Clock::now();
  const auto results = verify::run_all(seed);
  const bool ok = verify::print_table(out, results);
  out << (ok ? "all checks passed" : "some checks FAILED") << " in " << seconds_since(t0)
      << " s\n";
  return ok ? exit_ok : exit_failed;
}

}  // namespace gammasolve::cli
