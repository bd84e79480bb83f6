#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "orl/core/errors.hpp"
#include "orl/learn/mlp.hpp"
#include "orl/learn/policy.hpp"

namespace orl::learn {

// Everything needed to continue training exactly where it stopped.
struct Checkpoint {
  Mlp net;
  PolicyHead head;
  Adam adam;
  int iteration = 0;  // completed iterations
};

namespace detail {

inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& tok) {
  double v = 0.0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
    throw ConfigError("checkpoint: bad number '" + tok + "'");
  return v;
}

inline void write_array(std::ostream& out, const char* name, std::span<const double> values) {
  out << name << ' ' << values.size() << '\n';
  for (double v : values) out << format_double(v) << '\n';
}

inline std::vector<double> read_array(std::istream& in, const char* name) {
  std::string key;
  std::size_t n = 0;
  if (!(in >> key >> n) || key != name) throw ConfigError(std::string("checkpoint: expected '") + name + "'");
  std::vector<double> values(n);
  std::string tok;
  for (auto& v : values) {
    if (!(in >> tok)) throw ConfigError(std::string("checkpoint: truncated '") + name + "'");
    v = parse_double(tok);
  }
  return values;
}

}  // namespace detail

// Text format, one value per line, shortest round-trip decimal so a
// reload is bit-exact.
inline void write_checkpoint(std::ostream& out, const Checkpoint& ck) {
  out << "orl-checkpoint 1\n";
  out << "head " << (ck.head.kind == HeadKind::Categorical ? "categorical" : "gaussian") << ' '
      << detail::format_double(ck.head.sigma) << '\n';
  out << "layers " << ck.net.layer_sizes().size();
  for (int s : ck.net.layer_sizes()) out << ' ' << s;
  out << '\n';
  out << "iteration " << ck.iteration << '\n';
  detail::write_array(out, "params", ck.net.parameters());
  out << "adam " << ck.adam.step_count << ' ' << detail::format_double(ck.adam.learning_rate) << ' '
      << detail::format_double(ck.adam.beta1) << ' ' << detail::format_double(ck.adam.beta2) << ' '
      << detail::format_double(ck.adam.epsilon) << '\n';
  detail::write_array(out, "m", ck.adam.m);
  detail::write_array(out, "v", ck.adam.v);
}

inline Checkpoint read_checkpoint(std::istream& in) {
  std::string magic, key, kind, tok;
  int version = 0;
  if (!(in >> magic >> version) || magic != "orl-checkpoint") throw ConfigError("checkpoint: not a checkpoint file");
  if (version != 1) throw ConfigError("checkpoint: unsupported version " + std::to_string(version));
  Checkpoint ck;
  if (!(in >> key >> kind >> tok) || key != "head") throw ConfigError("checkpoint: expected 'head'");
  if (kind == "categorical") {
    ck.head.kind = HeadKind::Categorical;
  } else if (kind == "gaussian") {
    ck.head.kind = HeadKind::Gaussian;
  } else {
    throw ConfigError("checkpoint: unknown head '" + kind + "'");
  }
  ck.head.sigma = detail::parse_double(tok);
  std::size_t n_layers = 0;
  if (!(in >> key >> n_layers) || key != "layers" || n_layers < 2 || n_layers > 64)
    throw ConfigError("checkpoint: bad 'layers'");
  std::vector<int> sizes(n_layers);
  for (auto& s : sizes)
    if (!(in >> s)) throw ConfigError("checkpoint: truncated 'layers'");
  if (!(in >> key >> ck.iteration) || key != "iteration" || ck.iteration < 0)
    throw ConfigError("checkpoint: bad 'iteration'");
  auto params = detail::read_array(in, "params");
  try {
    ck.net = Mlp(std::move(sizes), std::move(params));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("checkpoint: ") + e.what());
  }
  std::string lr, b1, b2, eps;
  if (!(in >> key >> ck.adam.step_count >> lr >> b1 >> b2 >> eps) || key != "adam")
    throw ConfigError("checkpoint: bad 'adam'");
  ck.adam.learning_rate = detail::parse_double(lr);
  ck.adam.beta1 = detail::parse_double(b1);
  ck.adam.beta2 = detail::parse_double(b2);
  ck.adam.epsilon = detail::parse_double(eps);
  ck.adam.m = detail::read_array(in, "m");
  ck.adam.v = detail::read_array(in, "v");
  if (ck.adam.m.size() != ck.adam.v.size() ||
      (!ck.adam.m.empty() && ck.adam.m.size() != ck.net.parameter_count()))
    throw ConfigError("checkpoint: optimizer state does not match the network");
  return ck;
}

inline void save_checkpoint(const std::string& path, const Checkpoint& ck) {
  std::ostringstream buf;
  write_checkpoint(buf, ck);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write checkpoint " + path);
  out << buf.str();
  if (!out.flush()) throw std::runtime_error("cannot write checkpoint " + path);
}

inline Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open checkpoint " + path);
  return read_checkpoint(in);
}

}  // namespace orl::learn
