#include "eact/channel_spec.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "eact/coding_sim.hpp"
#include "json.hpp"

namespace eact {

namespace {

using nlohmann::json;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw DomainError("could not parse " + what + ": '" + s + "'");
  }
}

Index parse_index(const std::string& s, const std::string& what) {
  const double v = parse_double(s, what);
  const Index i = static_cast<Index>(std::llround(v));
  if (std::abs(v - double(i)) > 1e-12 || i < 1)
    throw DomainError(what + " must be a positive integer: '" + s + "'");
  return i;
}

Matrix matrix_from_json(const json& rows, const std::string& where) {
  if (!rows.is_array() || rows.empty())
    throw DomainError("expected a nonempty array of rows at " + where);
  const Index nr = static_cast<Index>(rows.size());
  const Index nc = static_cast<Index>(rows[0].size());
  Matrix m(nr, nc);
  for (Index i = 0; i < nr; ++i) {
    const json& row = rows[size_t(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != nc)
      throw DomainError("ragged matrix rows at " + where);
    for (Index j = 0; j < nc; ++j) {
      const json& c = row[size_t(j)];
      if (!c.is_array() || c.size() != 2)
        throw DomainError("matrix entries must be [re, im] pairs at " + where);
      m(i, j) = Complex(c[0].get<double>(), c[1].get<double>());
    }
  }
  return m;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j)
      row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

ChannelSpec preset_channel(const std::string& name, const std::string& params) {
  const auto parts = split(params, ':');
  ChannelSpec spec;
  spec.name = name + ":" + params;
  if (name == "identity") {
    if (parts.size() != 1) throw DomainError("identity preset takes one dimension");
    const Index d = parse_index(parts[0], "identity dimension");
    spec.channel = identity_channel(d);
    return spec;
  }
  if (name == "depolarizing") {
    if (parts.empty() || parts.size() > 2)
      throw DomainError("depolarizing preset takes p[:d]");
    const double p = parse_double(parts[0], "depolarizing probability");
    const Index d = parts.size() == 2 ? parse_index(parts[1], "dimension") : 2;
    if (p < 0.0 || p > 1.0) throw DomainError("depolarizing p must lie in [0,1]");
    QuantumChannel n;
    n.in_dim = n.out_dim = d;
    // N(rho) = (1-p) rho + p I/d via the Heisenberg-Weyl twirl
    n.kraus.push_back(std::sqrt(1.0 - p + p / double(d * d)) *
                      Matrix::Identity(d, d));
    for (Index y = 0; y < d; ++y)
      for (Index z = 0; z < d; ++z) {
        if (y == 0 && z == 0) continue;
        n.kraus.push_back((std::sqrt(p) / double(d)) * heisenberg_weyl({d, y, z}));
      }
    spec.channel = n;
    return spec;
  }
  if (name == "dephasing") {
    if (parts.size() != 1) throw DomainError("dephasing preset takes one probability");
    const double p = parse_double(parts[0], "dephasing probability");
    if (p < 0.0 || p > 1.0) throw DomainError("dephasing p must lie in [0,1]");
    QuantumChannel n;
    n.in_dim = n.out_dim = 2;
    n.kraus.push_back(std::sqrt(1.0 - p) * Matrix::Identity(2, 2));
    for (Index i = 0; i < 2; ++i) {
      Matrix k = Matrix::Zero(2, 2);
      k(i, i) = std::sqrt(p);
      n.kraus.push_back(k);
    }
    spec.channel = n;
    return spec;
  }
  if (name == "amplitude-damping") {
    if (parts.size() != 1)
      throw DomainError("amplitude-damping preset takes one decay parameter");
    const double g = parse_double(parts[0], "damping parameter");
    if (g < 0.0 || g > 1.0) throw DomainError("damping gamma must lie in [0,1]");
    QuantumChannel n;
    n.in_dim = n.out_dim = 2;
    Matrix k0 = Matrix::Zero(2, 2), k1 = Matrix::Zero(2, 2);
    k0(0, 0) = 1.0;
    k0(1, 1) = std::sqrt(1.0 - g);
    k1(0, 1) = std::sqrt(g);
    n.kraus = {k0, k1};
    spec.channel = n;
    return spec;
  }
  throw DomainError("unknown channel preset: " + name);
}

ChannelSpec channel_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DomainError(std::string("channel JSON parse error: ") + e.what());
  }
  ChannelSpec spec;
  spec.name = j.value("name", "channel");
  if (!j.contains("in_dim") || !j.contains("out_dim") || !j.contains("kraus"))
    throw DomainError("channel JSON needs in_dim, out_dim and kraus fields");
  QuantumChannel n;
  n.in_dim = j["in_dim"].get<Index>();
  n.out_dim = j["out_dim"].get<Index>();
  const json& ks = j["kraus"];
  if (!ks.is_array() || ks.empty())
    throw DomainError("channel JSON kraus must be a nonempty array");
  for (size_t i = 0; i < ks.size(); ++i) {
    const Matrix k = matrix_from_json(ks[i], "kraus[" + std::to_string(i) + "]");
    if (k.rows() != n.out_dim || k.cols() != n.in_dim)
      throw DomainError("kraus[" + std::to_string(i) + "] has the wrong shape");
    n.kraus.push_back(k);
  }
  n.validate();
  spec.channel = n;
  return spec;
}

std::string channel_to_json_text(const ChannelSpec& spec) {
  json j;
  j["name"] = spec.name;
  j["in_dim"] = spec.channel.in_dim;
  j["out_dim"] = spec.channel.out_dim;
  json ks = json::array();
  for (const Matrix& k : spec.channel.kraus) ks.push_back(matrix_to_json(k));
  j["kraus"] = std::move(ks);
  return j.dump(2);
}

ChannelSpec load_channel(const std::string& arg) {
  if (arg.rfind("preset:", 0) == 0) {
    const std::string rest = arg.substr(7);
    const size_t sep = rest.find(':');
    if (sep == std::string::npos)
      throw DomainError("preset syntax is preset:name:params");
    return preset_channel(rest.substr(0, sep), rest.substr(sep + 1));
  }
  ChannelSpec spec = channel_from_json_text(read_file(arg));
  return spec;
}

DensityOperator load_state(const std::string& arg) {
  if (arg.rfind("diag:", 0) == 0) {
    const auto parts = split(arg.substr(5), ',');
    if (parts.empty()) throw DomainError("diag state needs at least one entry");
    RealVector p(static_cast<Index>(parts.size()));
    for (size_t i = 0; i < parts.size(); ++i)
      p[static_cast<Index>(i)] = parse_double(parts[i], "diagonal entry");
    if (p.minCoeff() < 0.0 || std::abs(p.sum() - 1.0) > 1e-9)
      throw DomainError("diag state entries must be a probability vector");
    Matrix m = p.cast<Complex>().asDiagonal();
    return DensityOperator(m, {p.size()});
  }
  json j;
  try {
    j = json::parse(read_file(arg));
  } catch (const json::parse_error& e) {
    throw DomainError(std::string("state JSON parse error: ") + e.what());
  }
  if (!j.contains("matrix")) throw DomainError("state JSON needs a matrix field");
  const Matrix m = matrix_from_json(j["matrix"], "matrix");
  std::vector<Index> dims;
  if (j.contains("dims"))
    for (const auto& d : j["dims"]) dims.push_back(d.get<Index>());
  else
    dims = {m.rows()};
  return DensityOperator(m, dims);
}

}  // namespace eact
