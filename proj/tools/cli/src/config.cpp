// SPDX-License-Identifier: Apache-2.0

#include "config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "gammasolve/errors.hpp"
#include "gammasolve/fermionic.hpp"
#include "gammasolve/uplf.hpp"

namespace gammasolve::cli
{

namespace
{

using json = nlohmann::json;
using Eigen::MatrixXcd;

[[noreturn]] void fail(const std::string &path, const std::string &what)
{
  throw Error(ErrorCode::config, path + ": " + what);
}

// A JSON value together with its path for error messages.
struct Node
{
  const json &j;
  std::string path;

  Node at(const std::string &key) const { return {j.at(key), path + "." + key}; }
  Node at(std::size_t i) const { return {j.at(i), path + "[" + std::to_string(i) + "]"}; }
  bool has(const std::string &key) const { return j.is_object() && j.contains(key); }
};

void require_keys(const Node &n, const std::set<std::string> &allowed,
                  const std::set<std::string> &required = {})
{
  if (!n.j.is_object())
  {
    fail(n.path, "expected an object");
  }
  for (const auto &[key, value] : n.j.items())
  {
    if (!allowed.contains(key))
    {
      fail(n.path + "." + key, "unknown key");
    }
  }
  for (const auto &key : required)
  {
    if (!n.j.contains(key))
    {
      fail(n.path + "." + key, "missing required key");
    }
  }
}

double as_double(const Node &n)
{
  if (!n.j.is_number())
  {
    fail(n.path, "expected a number");
  }
  return n.j.get<double>();
}

long as_long(const Node &n)
{
  if (!n.j.is_number_integer())
  {
    fail(n.path, "expected an integer");
  }
  return n.j.get<long>();
}

bool as_bool(const Node &n)
{
  if (!n.j.is_boolean())
  {
    fail(n.path, "expected a boolean");
  }
  return n.j.get<bool>();
}

std::string as_string(const Node &n)
{
  if (!n.j.is_string())
  {
    fail(n.path, "expected a string");
  }
  return n.j.get<std::string>();
}

// number | [re, im] | {"re": x, "im": y}
cplx as_complex(const Node &n)
{
  if (n.j.is_number())
  {
    return n.j.get<double>();
  }
  if (n.j.is_array() && n.j.size() == 2 && n.j[0].is_number() && n.j[1].is_number())
  {
    return {n.j[0].get<double>(), n.j[1].get<double>()};
  }
  if (n.j.is_object())
  {
    require_keys(n, {"re", "im"});
    return {n.has("re") ? as_double(n.at("re")) : 0.0, n.has("im") ? as_double(n.at("im")) : 0.0};
  }
  fail(n.path, "expected a number, [re, im] or {re, im}");
}

std::vector<double> as_doubles(const Node &n)
{
  if (!n.j.is_array())
  {
    fail(n.path, "expected an array of numbers");
  }
  std::vector<double> out;
  for (std::size_t i = 0; i < n.j.size(); ++i)
  {
    out.push_back(as_double(n.at(i)));
  }
  return out;
}

std::vector<cplx> as_complexes(const Node &n)
{
  if (!n.j.is_array())
  {
    fail(n.path, "expected an array of complex values");
  }
  std::vector<cplx> out;
  for (std::size_t i = 0; i < n.j.size(); ++i)
  {
    out.push_back(as_complex(n.at(i)));
  }
  return out;
}

// complex scalar (1 x 1) | [[row], [row], ...] of complex entries.
MatrixXcd as_matrix(const Node &n)
{
  if (n.j.is_array() && !n.j.empty() && n.j[0].is_array())
  {
    const std::size_t rows = n.j.size();
    const std::size_t cols = n.j[0].size();
    MatrixXcd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r)
    {
      const Node row = n.at(r);
      if (!row.j.is_array() || row.j.size() != cols)
      {
        fail(row.path, "matrix rows must be arrays of equal length");
      }
      for (std::size_t c = 0; c < cols; ++c)
      {
        m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = as_complex(row.at(c));
      }
    }
    return m;
  }
  return scalar_matrix(as_complex(n));
}

Field read_voxels(const Node &n, const Grid &grid, const std::filesystem::path &base)
{
  std::filesystem::path path = as_string(n);
  if (path.is_relative() && !base.empty())
  {
    path = base / path;
  }
  if (!std::filesystem::exists(path))
  {
    throw Error(ErrorCode::io, n.path + ": voxel file " + path.string() + " does not exist");
  }
  Field f = read_uplf(path);
  if (!(f.grid().dims() == grid.dims()))
  {
    throw Error(ErrorCode::shape, n.path + ": voxel file dimensions do not match the grid");
  }
  if (f.representation() != Representation::real_space)
  {
    f = to_real(f);
  }
  return f;
}

template <typename T, typename ValueFn>
Param<T> as_param(const Node &n, const Grid &grid, const std::filesystem::path &base,
                  ValueFn value)
{
  if (n.j.is_object() && !n.j.contains("re") && !n.j.contains("im"))
  {
    if (n.j.size() != 1)
    {
      fail(n.path, "descriptor must hold exactly one of constant, layered, checkerboard, voxel");
    }
    const std::string kind = n.j.begin().key();
    const Node inner = n.at(kind);
    if (kind == "constant")
    {
      return value(inner);
    }
    if (kind == "layered")
    {
      require_keys(inner, {"axis", "breakpoints", "values"}, {"axis", "breakpoints", "values"});
      Layered<T> l;
      l.axis = static_cast<int>(as_long(inner.at("axis")));
      l.breakpoints = as_doubles(inner.at("breakpoints"));
      const Node values = inner.at("values");
      if (!values.j.is_array() || values.j.size() != l.breakpoints.size() + 1)
      {
        fail(values.path, "needs one more value than breakpoints");
      }
      for (std::size_t i = 0; i < values.j.size(); ++i)
      {
        l.values.push_back(value(values.at(i)));
      }
      if (l.axis < 0 || static_cast<std::size_t>(l.axis) >= grid.dimension())
      {
        fail(inner.path + ".axis", "axis out of range");
      }
      return l;
    }
    if (kind == "checkerboard")
    {
      if (!inner.j.is_array() || inner.j.empty())
      {
        fail(inner.path, "expected a non-empty array of phase values");
      }
      Checkerboard<T> c;
      for (std::size_t i = 0; i < inner.j.size(); ++i)
      {
        c.values.push_back(value(inner.at(i)));
      }
      return c;
    }
    if (kind == "voxel")
    {
      const Field f = read_voxels(inner, grid, base);
      if (f.components() != 1)
      {
        throw Error(ErrorCode::shape, inner.path + ": voxel parameter files must be scalar");
      }
      Table<T> t;
      for (std::size_t p = 0; p < f.points(); ++p)
      {
        if constexpr (std::is_same_v<T, cplx>)
        {
          t.values.push_back(f(p, 0));
        }
        else
        {
          t.values.push_back(scalar_matrix(f(p, 0)));
        }
      }
      return t;
    }
    fail(n.path + "." + kind, "unknown descriptor");
  }
  return value(n);
}

ScalarParam scalar_param(const Node &n, const Grid &grid, const std::filesystem::path &base)
{
  return as_param<cplx>(n, grid, base, [](const Node &v) { return as_complex(v); });
}

MatrixParam matrix_param(const Node &n, const Grid &grid, const std::filesystem::path &base)
{
  return as_param<MatrixXcd>(n, grid, base, [](const Node &v) { return as_matrix(v); });
}

Grid parse_grid(const Node &n)
{
  require_keys(n, {"dims", "lengths"}, {"dims"});
  const Node dims = n.at("dims");
  if (!dims.j.is_array() || dims.j.empty())
  {
    fail(dims.path, "expected a non-empty array of positive integers");
  }
  std::vector<std::size_t> d;
  for (std::size_t i = 0; i < dims.j.size(); ++i)
  {
    const long v = as_long(dims.at(i));
    if (v <= 0)
    {
      fail(dims.path + "[" + std::to_string(i) + "]", "must be positive");
    }
    d.push_back(static_cast<std::size_t>(v));
  }
  std::vector<double> lengths(d.size(), 1.0);
  if (n.has("lengths"))
  {
    lengths = as_doubles(n.at("lengths"));
    if (lengths.size() != d.size())
    {
      fail(n.path + ".lengths", "must match dims");
    }
  }
  try
  {
    return Grid(d, lengths);
  }
  catch (const Error &e)
  {
    fail(n.path, e.what());
  }
}

SolverOptions parse_solver(const Node &n)
{
  require_keys(n, {"tol", "max_iter", "restart", "method", "reference"});
  SolverOptions o;
  if (n.has("tol"))
  {
    o.tol = as_double(n.at("tol"));
    if (!(o.tol > 0.0))
    {
      fail(n.path + ".tol", "must be positive");
    }
  }
  if (n.has("max_iter"))
  {
    const long v = as_long(n.at("max_iter"));
    if (v <= 0)
    {
      fail(n.path + ".max_iter", "must be positive");
    }
    o.max_iter = static_cast<std::size_t>(v);
  }
  if (n.has("restart"))
  {
    const long v = as_long(n.at("restart"));
    if (v <= 0)
    {
      fail(n.path + ".restart", "must be positive");
    }
    o.restart = static_cast<std::size_t>(v);
  }
  if (n.has("method"))
  {
    const std::string m = as_string(n.at("method"));
    if (m == "krylov")
    {
      o.method = Method::krylov;
    }
    else if (m == "fixed_point")
    {
      o.method = Method::fixed_point;
    }
    else
    {
      fail(n.path + ".method", "expected krylov or fixed_point");
    }
  }
  if (n.has("reference"))
  {
    o.reference = as_complex(n.at("reference"));
  }
  return o;
}

MaterialSpec parse_material(const std::string &physics, const Node &m, cplx omega,
                            const Grid &grid, const std::filesystem::path &base)
{
  auto S = [&](const char *key) { return scalar_param(m.at(key), grid, base); };
  auto M = [&](const char *key) { return matrix_param(m.at(key), grid, base); };
  auto C = [&](const char *key) { return as_complex(m.at(key)); };
  if (physics == "acoustics")
  {
    require_keys(m, {"kappa", "rho", "scaled"});
    AcousticsSpec s;
    s.omega = omega;
    if (m.has("kappa")) s.kappa = S("kappa");
    if (m.has("rho")) s.rho = M("rho");
    if (m.has("scaled")) s.scaled = as_bool(m.at("scaled"));
    return s;
  }
  if (physics == "elastodynamics")
  {
    require_keys(m, {"stiffness", "rho", "coupling"}, {"stiffness"});
    ElastodynamicsSpec s;
    s.omega = omega;
    s.stiffness = M("stiffness");
    if (m.has("rho")) s.rho = M("rho");
    if (m.has("coupling")) s.coupling = M("coupling");
    return s;
  }
  if (physics == "maxwell")
  {
    require_keys(m, {"epsilon", "mu"});
    MaxwellSpec s;
    s.omega = omega;
    if (m.has("epsilon")) s.epsilon = M("epsilon");
    if (m.has("mu")) s.mu = M("mu");
    return s;
  }
  if (physics == "brinkman")
  {
    require_keys(m, {"viscosity", "permeability", "eta", "rho"}, {"viscosity"});
    BrinkmanSpec s;
    s.omega = omega;
    s.viscosity = M("viscosity");
    if (m.has("permeability")) s.permeability = M("permeability");
    if (m.has("eta")) s.eta = S("eta");
    if (m.has("rho")) s.rho = M("rho");
    return s;
  }
  if (physics == "oseen")
  {
    require_keys(m, {"kappa", "bulk_viscosity", "viscosity", "velocity", "rho"});
    OseenSpec s;
    s.omega = omega;
    if (m.has("kappa")) s.kappa = S("kappa");
    if (m.has("bulk_viscosity")) s.bulk_viscosity = S("bulk_viscosity");
    if (m.has("viscosity")) s.viscosity = S("viscosity");
    if (m.has("velocity")) s.velocity = M("velocity");
    if (m.has("rho")) s.rho = M("rho");
    return s;
  }
  if (physics == "navier_stokes")
  {
    require_keys(m, {"viscosity", "rho", "velocity", "velocity_gradient", "penalty", "stationary"});
    NavierStokesSpec s;
    s.dimension = static_cast<int>(grid.dimension());
    s.omega = omega;
    s.velocity = MatrixXcd::Zero(s.dimension, 1);
    s.velocity_gradient = MatrixXcd::Zero(s.dimension, s.dimension);
    if (m.has("viscosity")) s.viscosity = S("viscosity");
    if (m.has("rho")) s.rho = C("rho");
    if (m.has("velocity")) s.velocity = M("velocity");
    if (m.has("velocity_gradient")) s.velocity_gradient = M("velocity_gradient");
    if (m.has("penalty")) s.penalty = as_double(m.at("penalty"));
    if (m.has("stationary")) s.stationary = as_bool(m.at("stationary"));
    return s;
  }
  if (physics == "thermoacoustic")
  {
    require_keys(m, {"bulk_viscosity", "viscosity", "beta_T", "heat_capacity", "alpha0",
                     "conductivity", "rho0", "T0"});
    ThermoacousticSpec s;
    s.omega = omega;
    if (m.has("bulk_viscosity")) s.bulk_viscosity = C("bulk_viscosity");
    if (m.has("viscosity")) s.viscosity = C("viscosity");
    if (m.has("beta_T")) s.beta_T = C("beta_T");
    if (m.has("heat_capacity")) s.heat_capacity = C("heat_capacity");
    if (m.has("alpha0")) s.alpha0 = C("alpha0");
    if (m.has("conductivity")) s.conductivity = M("conductivity");
    if (m.has("rho0")) s.rho0 = C("rho0");
    if (m.has("T0")) s.T0 = C("T0");
    return s;
  }
  if (physics == "love")
  {
    require_keys(m, {"k1", "mu", "rho"}, {"k1"});
    LoveSpec s;
    s.omega = omega;
    s.k1 = as_double(m.at("k1"));
    if (m.has("mu")) s.mu = S("mu");
    if (m.has("rho")) s.rho = S("rho");
    return s;
  }
  if (physics == "schrodinger")
  {
    require_keys(m, {"A", "potential", "energy"}, {"A"});
    SchrodingerSpec s;
    s.A = as_matrix(m.at("A")).real();
    if (s.A.size() == 1)
    {
      s.A = s.A(0, 0) * Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(grid.dimension()),
                                                  static_cast<Eigen::Index>(grid.dimension()));
    }
    if (m.has("potential")) s.potential = S("potential");
    if (m.has("energy")) s.energy = C("energy");
    return s;
  }
  fail("$.physics", "unknown physics '" + physics + "'");
}

SourceSpec parse_source(const Node &n, const Grid &grid, const std::filesystem::path &base)
{
  if (!n.j.is_object() || !n.j.contains("type"))
  {
    fail(n.path + ".type", "missing required key");
  }
  const std::string type = as_string(n.at("type"));
  if (type == "zero")
  {
    require_keys(n, {"type"});
    return ZeroSource{};
  }
  if (type == "plane_wave")
  {
    require_keys(n, {"type", "k_index", "amplitude"}, {"k_index", "amplitude"});
    PlaneWaveSource s;
    const Node k = n.at("k_index");
    if (!k.j.is_array() || k.j.size() != grid.dimension())
    {
      fail(k.path, "needs one integer per grid axis");
    }
    for (std::size_t i = 0; i < k.j.size(); ++i)
    {
      s.k_index.push_back(as_long(k.at(i)));
    }
    s.amplitude = as_complexes(n.at("amplitude"));
    return s;
  }
  if (type == "bump")
  {
    require_keys(n, {"type", "center", "width", "amplitude"}, {"center", "width", "amplitude"});
    BumpSource s;
    s.center = as_doubles(n.at("center"));
    if (s.center.size() != grid.dimension())
    {
      fail(n.path + ".center", "needs one coordinate per grid axis");
    }
    s.width = as_double(n.at("width"));
    if (!(s.width > 0.0))
    {
      fail(n.path + ".width", "must be positive");
    }
    s.amplitude = as_complexes(n.at("amplitude"));
    return s;
  }
  if (type == "voxel")
  {
    require_keys(n, {"type", "path"}, {"path"});
    std::filesystem::path path = as_string(n.at("path"));
    if (path.is_relative() && !base.empty())
    {
      path = base / path;
    }
    if (!std::filesystem::exists(path))
    {
      throw Error(ErrorCode::io, n.path + ".path: voxel file " + path.string() + " does not exist");
    }
    return VoxelSource{path};
  }
  fail(n.path + ".type", "expected zero, plane_wave, bump or voxel");
}

json parse_json(std::string_view text)
{
  try
  {
    return json::parse(text);
  }
  catch (const json::parse_error &e)
  {
    throw Error(ErrorCode::config, std::string("$: malformed JSON: ") + e.what());
  }
}

}  // namespace

RunConfig parse_config(std::string_view text, const std::filesystem::path &base_dir)
{
  const json doc = parse_json(text);
  const Node root{doc, "$"};
  require_keys(root, {"physics", "grid", "omega", "material", "source", "solver", "bloch", "output"},
               {"physics", "grid"});
  RunConfig c;
  c.physics = as_string(root.at("physics"));
  c.grid = parse_grid(root.at("grid"));
  cplx omega = 1.0;
  if (root.has("omega"))
  {
    omega = as_complex(root.at("omega"));
  }
  if (omega == cplx{0.0} && c.physics != "schrodinger")
  {
    fail("$.omega", "must be nonzero for frequency-scaled physics");
  }
  const json empty = json::object();
  const Node material = root.has("material") ? root.at("material") : Node{empty, "$.material"};
  c.omega = omega;
  c.material = parse_material(c.physics, material, omega, c.grid, base_dir);
  c.source = root.has("source") ? parse_source(root.at("source"), c.grid, base_dir) : ZeroSource{};
  if (root.has("solver"))
  {
    c.solver = parse_solver(root.at("solver"));
  }
  if (root.has("bloch"))
  {
    const Node b = root.at("bloch");
    require_keys(b, {"k0", "alpha"}, {"k0"});
    BlochSpec spec;
    spec.k0 = as_doubles(b.at("k0"));
    if (spec.k0.size() != c.grid.dimension())
    {
      fail(b.path + ".k0", "needs one component per grid axis");
    }
    if (b.has("alpha"))
    {
      spec.alpha = scalar_param(b.at("alpha"), c.grid, base_dir);
    }
    c.solver.bloch_shift = spec.k0;
    c.bloch = std::move(spec);
  }
  if (root.has("output"))
  {
    c.output = std::filesystem::path(as_string(root.at("output")));
  }
  return c;
}

namespace
{

std::string read_text(const std::filesystem::path &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
  {
    throw Error(ErrorCode::io, "cannot open config file " + path.string());
  }
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

RunConfig load_config(const std::filesystem::path &path)
{
  return parse_config(read_text(path), path.parent_path());
}

Field sample_scalar(const ScalarParam &p, const Grid &grid)
{
  Field f(grid, BlockLayout{Block::scalar()});
  for (std::size_t i = 0; i < grid.points(); ++i)
  {
    f(i, 0) = resolve(p, grid, i);
  }
  return f;
}

Field build_source(const RunConfig &config, const BlockLayout &layout)
{
  const Grid &grid = config.grid;
  const auto c = static_cast<std::size_t>(layout.total_components());
  auto check_amplitude = [&](const std::vector<cplx> &a) {
    if (a.size() != c)
    {
      throw Error(ErrorCode::config, "$.source.amplitude: needs " + std::to_string(c) +
                                         " entries for layout " + layout.describe());
    }
  };
  return std::visit(
      [&](const auto &s) -> Field {
        using S = std::decay_t<decltype(s)>;
        Field f(grid, layout);
        if constexpr (std::is_same_v<S, PlaneWaveSource>)
        {
          check_amplitude(s.amplitude);
          for (std::size_t p = 0; p < grid.points(); ++p)
          {
            const auto x = grid.position(p);
            double phase = 0.0;
            for (std::size_t a = 0; a < x.size(); ++a)
            {
              phase += 2.0 * std::numbers::pi * static_cast<double>(s.k_index[a]) * x[a] /
                       grid.lengths()[a];
            }
            const cplx e = std::exp(cplx{0.0, phase});
            for (std::size_t a = 0; a < c; ++a)
            {
              f(p, static_cast<int>(a)) = s.amplitude[a] * e;
            }
          }
        }
        else if constexpr (std::is_same_v<S, BumpSource>)
        {
          check_amplitude(s.amplitude);
          for (std::size_t p = 0; p < grid.points(); ++p)
          {
            const auto x = grid.position(p);
            double r2 = 0.0;
            for (std::size_t a = 0; a < x.size(); ++a)
            {
              // Minimum-image distance on the periodic cell.
              const double L = grid.lengths()[a];
              double d = std::remainder(x[a] - s.center[a], L);
              r2 += d * d;
            }
            const double g = std::exp(-0.5 * r2 / (s.width * s.width));
            for (std::size_t a = 0; a < c; ++a)
            {
              f(p, static_cast<int>(a)) = s.amplitude[a] * g;
            }
          }
        }
        else if constexpr (std::is_same_v<S, VoxelSource>)
        {
          f = read_uplf(s.path);
          if (!(f.grid().dims() == grid.dims()) || !(f.layout() == layout))
          {
            throw Error(ErrorCode::shape, "$.source.path: voxel source does not match grid " +
                                              std::string("and layout ") + layout.describe());
          }
          if (f.representation() != Representation::real_space)
          {
            f = to_real(f);
          }
          f = Field(grid, layout, Representation::real_space,
                    std::vector<cplx>(f.values().begin(), f.values().end()));
        }
        return f;
      },
      config.source);
}

SchrodingerConfig parse_schrodinger_config(std::string_view text,
                                           const std::filesystem::path &base_dir)
{
  const json doc = parse_json(text);
  const Node root{doc, "$"};
  require_keys(root,
               {"grid", "electrons", "d_space", "A", "potential", "pair_potential", "perturbation",
                "energy", "state", "solver"},
               {"grid", "perturbation"});
  SchrodingerConfig c;
  c.grid = parse_grid(root.at("grid"));
  const auto d = static_cast<int>(c.grid.dimension());
  if (root.has("electrons"))
  {
    c.electrons = static_cast<int>(as_long(root.at("electrons")));
    if (c.electrons < 1 || c.electrons > 4)
    {
      fail("$.electrons", "must be between 1 and 4");
    }
  }
  c.d_space = d / c.electrons;
  if (root.has("d_space"))
  {
    c.d_space = static_cast<int>(as_long(root.at("d_space")));
  }
  if (c.d_space < 1 || c.electrons * c.d_space != d)
  {
    fail("$.d_space", "grid dimension must equal electrons * d_space");
  }
  if (c.electrons > 1)
  {
    const auto &dims = c.grid.dims();
    const auto &lengths = c.grid.lengths();
    for (int a = 1; a < d; ++a)
    {
      if (dims[static_cast<std::size_t>(a)] != dims[0] || lengths[static_cast<std::size_t>(a)] != lengths[0])
      {
        fail("$.grid", "every electron axis needs the same points and length");
      }
    }
  }
  c.A = Eigen::MatrixXd::Identity(d, d);
  if (root.has("A"))
  {
    const MatrixXcd a = as_matrix(root.at("A"));
    if (a.size() != 1 && (a.rows() != d || a.cols() != d))
    {
      fail("$.A", "expected a scalar or a " + std::to_string(d) + "x" + std::to_string(d) + " matrix");
    }
    c.A = a.size() == 1 ? Eigen::MatrixXd(a(0, 0).real() * Eigen::MatrixXd::Identity(d, d))
                        : Eigen::MatrixXd(a.real());
  }
  if (root.has("potential"))
  {
    c.potential = scalar_param(root.at("potential"), c.grid, base_dir);
  }
  if (root.has("pair_potential"))
  {
    const Node n = root.at("pair_potential");
    require_keys(n, {"strength", "softening"}, {"strength"});
    PairInteraction p;
    p.strength = as_double(n.at("strength"));
    if (n.has("softening"))
    {
      p.softening = as_double(n.at("softening"));
    }
    if (!(p.softening > 0.0))
    {
      fail(n.path + ".softening", "must be positive");
    }
    if (c.electrons < 2)
    {
      fail(n.path, "needs at least two electrons");
    }
    c.pair = p;
  }
  c.perturbation = scalar_param(root.at("perturbation"), c.grid, base_dir);
  if (root.has("energy"))
  {
    const Node e = root.at("energy");
    if (!(e.j.is_string() && e.j.get<std::string>() == "solve-dense"))
    {
      c.energy = as_double(e);
    }
  }
  if (root.has("state"))
  {
    c.state = static_cast<int>(as_long(root.at("state")));
    if (c.state < 0 || static_cast<std::size_t>(c.state) >= c.grid.points())
    {
      fail("$.state", "out of range");
    }
  }
  if (root.has("solver"))
  {
    c.solver = parse_solver(root.at("solver"));
  }
  return c;
}

Field total_potential(const SchrodingerConfig &c)
{
  Field V = sample_scalar(c.potential, c.grid);
  if (!c.pair)
  {
    return V;
  }
  const double length = c.grid.lengths()[0];
  const auto ds = static_cast<std::size_t>(c.d_space);
  for (std::size_t p = 0; p < c.grid.points(); ++p)
  {
    const auto x = c.grid.position(p);
    for (int i = 0; i < c.electrons; ++i)
    {
      for (int j = i + 1; j < c.electrons; ++j)
      {
        double r2 = 0.0;
        for (std::size_t a = 0; a < ds; ++a)
        {
          const double dx = std::remainder(x[static_cast<std::size_t>(i) * ds + a] -
                                               x[static_cast<std::size_t>(j) * ds + a],
                                           length);
          r2 += dx * dx;
        }
        V(p, 0) += c.pair->strength / std::sqrt(r2 + c.pair->softening * c.pair->softening);
      }
    }
  }
  return V;
}

}  // namespace gammasolve::cli
