#pragma once
#include "vlwe/errors.hpp"
#include "vlwe/modarith.hpp"

#include <cstddef>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace vlwe {

enum class NttMode {
  Auto,    // fast path per coordinate when the ring supports it
  Require, // construction fails unless every coordinate has a fast path
  Disable, // schoolbook only
};

// Describes R_q = (+)_{i=1..n} Z_q[x_i]/<f_i(x_i)>: n univariate monic
// defining polynomials, one per coordinate, no mixed terms.
struct VarietyParams {
  std::size_t n = 0;
  std::vector<std::vector<u64>> f; // f[i] = coefficients of f_i, low to high, monic
  u64 q = 0;
  u64 t = 0;
  double sigma = 0.0;

  std::size_t degree(std::size_t i) const { return f[i].size() - 1; }

  bool uniform_degree() const {
    for (const auto& fi : f)
      if (fi.size() != f[0].size()) return false;
    return true;
  }

  u64 delta() const { return q / t; }

  // Plaintext scale at a smaller modulus (after switching).
  static u64 delta_at(u64 q_level, u64 t) { return q_level / t; }

  // All coordinates constrained by x^d + 1.
  static VarietyParams power_of_two(std::size_t n, std::size_t d, u64 q, u64 t,
                                    double sigma) {
    VarietyParams p;
    p.n = n;
    p.q = q;
    p.t = t;
    p.sigma = sigma;
    std::vector<u64> fi(d + 1, 0);
    fi[0] = 1;
    fi[d] = 1;
    p.f.assign(n, fi);
    return p;
  }

  // Accepted moduli: odd q >= 3 (odd primes and their powers) or a power
  // of two >= 4. Oddness is what the transform path later requires; the
  // schoolbook path works for either family.
  static bool modulus_ok(u64 q) {
    return (q >= 3 && (q & 1) == 1) || (q >= 4 && is_power_of_two(q));
  }

  void validate() const {
    if (n == 0) throw DomainError("params: n must be positive");
    if (f.size() != n) throw DomainError("params: need one f_i per coordinate");
    if (!modulus_ok(q))
      throw DomainError("params: q must be odd (>= 3) or a power of two");
    if (q >= (1ull << kMaxModulusBits))
      throw DomainError("params: q must fit in 62 bits");
    if (t < 2 || t >= q) throw DomainError("params: require 1 < t < q");
    if (q / t < 2) throw DomainError("params: require floor(q/t) >= 2");
    if (!(sigma > 0.0)) throw DomainError("params: sigma must be positive");
    for (std::size_t i = 0; i < n; ++i) {
      if (f[i].size() < 2)
        throw DomainError("params: f_" + std::to_string(i) +
                          " must have degree >= 1");
      if (f[i].back() != 1)
        throw DomainError("params: f_" + std::to_string(i) + " must be monic");
      for (u64 c : f[i])
        if (c >= q)
          throw DomainError("params: f_" + std::to_string(i) +
                            " coefficients must be reduced mod q");
    }
  }
};

// Scheme-level configuration on top of the ring: LWE vector dimension
// n_lwe (distinct from the coordinate count n), sample count m, and the
// descending modulus chain used by modulus switching (chain[0] == q).
struct SchemeParams {
  VarietyParams ring;
  std::size_t n_lwe = 1;
  std::size_t m = 2;
  std::vector<u64> modulus_chain;
  NttMode ntt = NttMode::Auto;

  std::vector<u64> chain() const {
    return modulus_chain.empty() ? std::vector<u64>{ring.q} : modulus_chain;
  }

  void validate() const {
    ring.validate();
    if (n_lwe == 0) throw DomainError("params: n_lwe must be positive");
    if (m < n_lwe) throw DomainError("params: require m >= n_lwe");
    if (!modulus_chain.empty()) {
      if (modulus_chain[0] != ring.q)
        throw DomainError("params: modulus_chain[0] must equal q");
      for (std::size_t k = 0; k < modulus_chain.size(); ++k) {
        const u64 qk = modulus_chain[k];
        if (!VarietyParams::modulus_ok(qk))
          throw DomainError("params: bad chain modulus");
        if (qk / ring.t < 2)
          throw DomainError("params: chain modulus too small for t");
        if (k > 0 && qk >= modulus_chain[k - 1])
          throw DomainError("params: modulus_chain must strictly descend");
        for (const auto& fi : ring.f)
          for (u64 c : fi)
            if (c >= qk)
              throw DomainError(
                  "params: f coefficients must be reduced mod every chain "
                  "modulus");
      }
    }
  }
};

// Flat key-value text format (one `key=value` per line, `#` comments).
// Keys: n, d, q, t, sigma, n_lwe, m, modulus_chain, use_ntt. The text
// format covers the uniform-degree x^d+1 family; arbitrary monic f_i go
// through the binary container instead.
inline SchemeParams parse_params_text(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto strip = [](std::string s) {
      auto b = s.find_first_not_of(" \t\r");
      auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    line = strip(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("params file: expected key=value, got '" + line + "'");
    kv[strip(line.substr(0, eq))] = strip(line.substr(eq + 1));
  }

  auto need = [&](const std::string& key) -> const std::string& {
    auto it = kv.find(key);
    if (it == kv.end()) throw ParseError("params file: missing key '" + key + "'");
    return it->second;
  };
  auto as_u64 = [](const std::string& s) -> u64 {
    std::size_t pos = 0;
    u64 v = std::stoull(s, &pos, 0);
    if (pos != s.size()) throw ParseError("params file: bad integer '" + s + "'");
    return v;
  };

  SchemeParams sp;
  const std::size_t n = static_cast<std::size_t>(as_u64(need("n")));
  const std::size_t d = static_cast<std::size_t>(as_u64(need("d")));
  if (d == 0) throw ParseError("params file: d must be positive");
  sp.ring =
      VarietyParams::power_of_two(n, d, as_u64(need("q")), as_u64(need("t")),
                                  std::stod(need("sigma")));
  if (kv.count("n_lwe")) sp.n_lwe = static_cast<std::size_t>(as_u64(kv["n_lwe"]));
  if (kv.count("m")) sp.m = static_cast<std::size_t>(as_u64(kv["m"]));
  if (kv.count("modulus_chain")) {
    std::istringstream cs(kv["modulus_chain"]);
    std::string item;
    while (std::getline(cs, item, ','))
      if (!item.empty()) sp.modulus_chain.push_back(as_u64(item));
  }
  if (kv.count("use_ntt")) {
    const std::string& v = kv["use_ntt"];
    if (v == "auto")
      sp.ntt = NttMode::Auto;
    else if (v == "on")
      sp.ntt = NttMode::Require;
    else if (v == "off")
      sp.ntt = NttMode::Disable;
    else
      throw ParseError("params file: use_ntt must be auto|on|off");
  }
  sp.validate();
  return sp;
}

inline std::string write_params_text(const SchemeParams& sp) {
  if (!sp.ring.uniform_degree())
    throw DomainError("params text format requires a uniform degree");
  std::ostringstream out;
  out << "n=" << sp.ring.n << "\n";
  out << "d=" << sp.ring.degree(0) << "\n";
  out << "q=" << sp.ring.q << "\n";
  out << "t=" << sp.ring.t << "\n";
  out << "sigma=" << sp.ring.sigma << "\n";
  out << "n_lwe=" << sp.n_lwe << "\n";
  out << "m=" << sp.m << "\n";
  if (!sp.modulus_chain.empty()) {
    out << "modulus_chain=";
    for (std::size_t k = 0; k < sp.modulus_chain.size(); ++k)
      out << (k ? "," : "") << sp.modulus_chain[k];
    out << "\n";
  }
  switch (sp.ntt) {
    case NttMode::Auto: out << "use_ntt=auto\n"; break;
    case NttMode::Require: out << "use_ntt=on\n"; break;
    case NttMode::Disable: out << "use_ntt=off\n"; break;
  }
  return out.str();
}

inline SchemeParams load_params_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open params file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_params_text(ss.str());
}

} // namespace vlwe
