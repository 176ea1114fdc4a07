// Command-line front end: key management, encryption, homomorphic
// evaluation, noise simulation, attack-cost estimation, parameter
// recommendation, toy attacks, and the VLWE/RLWE benchmark.

#include "vlwe/vlwe.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace vlwe;

struct GlobalOpts {
  std::string params_path;
  std::optional<std::string> seed_text;
  std::string format = "human"; // human | tsv
};

u64 parse_seed(const std::string& text) {
  try {
    std::size_t pos = 0;
    const u64 v = std::stoull(text, &pos, 0);
    if (pos == text.size()) return v;
  } catch (const std::exception&) {
  }
  std::size_t pos = 0;
  const u64 v = std::stoull(text, &pos, 16);
  if (pos != text.size()) throw DomainError("--seed: cannot parse '" + text + "'");
  return v;
}

SamplerState make_sampler(const GlobalOpts& g) {
  return g.seed_text ? SamplerState::from_seed64(parse_seed(*g.seed_text))
                     : SamplerState::from_os_entropy();
}

SchemeParams load_params(const GlobalOpts& g) {
  if (g.params_path.empty()) throw DomainError("--params is required");
  SchemeParams sp = load_params_file(g.params_path);
  sp.validate();
  return sp;
}

std::vector<u64> parse_vector(const std::string& text) {
  std::vector<u64> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ','))
    if (!item.empty()) out.push_back(std::stoull(item));
  if (out.empty()) throw DomainError("--vector: empty vector");
  return out;
}

std::string join_u64(const std::vector<u64>& v) {
  std::ostringstream out;
  for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << v[i];
  return out.str();
}

void emit_table(const GlobalOpts& g,
                const std::vector<std::string>& header,
                const std::vector<std::vector<std::string>>& rows) {
  if (g.format == "tsv") {
    for (std::size_t i = 0; i < header.size(); ++i)
      std::cout << (i ? "\t" : "") << header[i];
    std::cout << "\n";
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i)
        std::cout << (i ? "\t" : "") << row[i];
      std::cout << "\n";
    }
    return;
  }
  std::vector<std::size_t> width(header.size());
  for (std::size_t i = 0; i < header.size(); ++i) width[i] = header[i].size();
  for (const auto& row : rows)
    for (std::size_t i = 0; i < row.size(); ++i)
      width[i] = std::max(width[i], row[i].size());
  auto line = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i)
      std::cout << (i ? "  " : "") << std::left << std::setw(static_cast<int>(width[i]))
                << row[i];
    std::cout << "\n";
  };
  line(header);
  for (const auto& row : rows) line(row);
}

std::string fmt_double(double v) {
  std::ostringstream out;
  out << std::setprecision(6) << v;
  return out.str();
}

// ---- subcommand bodies ----

int run_keygen(const GlobalOpts& g, const std::string& out_dir) {
  const SchemeParams sp = load_params(g);
  Scheme sch(sp);
  SamplerState st = make_sampler(g);
  const KeyPair kp = sch.keygen(st);
  const RelinKey rlk = sch.relin_keygen(kp.sk, st);
  std::filesystem::create_directories(out_dir);
  save_bytes(out_dir + "/secret.key", serialize_secret_key(sp.ring, kp.sk));
  save_bytes(out_dir + "/public.key", serialize_public_key(sp.ring, kp.pk));
  save_bytes(out_dir + "/relin.key", serialize_relin_key(sp.ring, rlk));
  std::cout << "wrote " << out_dir << "/{secret,public,relin}.key\n";
  return 0;
}

int run_encrypt(const GlobalOpts& g, const std::string& vec_text,
                const std::string& pk_path, const std::string& out_path) {
  const SchemeParams sp = load_params(g);
  Scheme sch(sp);
  SamplerState st = make_sampler(g);
  const PublicKey pk = deserialize_public_key(sp.ring, load_bytes(pk_path));
  const Plaintext pt = sch.encode_vector(parse_vector(vec_text));
  const Ciphertext ct = sch.encrypt(pk, pt, st);
  save_bytes(out_path, serialize_ciphertext(sp.ring, ct));
  std::cout << "wrote " << out_path << "\n";
  return 0;
}

int run_decrypt(const GlobalOpts& g, const std::string& sk_path,
                const std::string& ct_path, const std::string& out_path) {
  const SchemeParams sp = load_params(g);
  Scheme sch(sp);
  const SecretKey sk = deserialize_secret_key(sp.ring, load_bytes(sk_path));
  const Ciphertext ct = deserialize_ciphertext(sp, load_bytes(ct_path));
  const std::string text = join_u64(sch.decode_vector(sch.decrypt(sk, ct)));
  if (out_path.empty()) {
    std::cout << text << "\n";
  } else {
    std::ofstream out(out_path, std::ios::trunc);
    if (!out) throw ParseError("cannot open for writing: " + out_path);
    out << text << "\n";
  }
  return 0;
}

int run_add(const GlobalOpts& g, const std::string& a_path,
            const std::string& b_path, const std::string& out_path) {
  const SchemeParams sp = load_params(g);
  Scheme sch(sp);
  const Ciphertext a = deserialize_ciphertext(sp, load_bytes(a_path));
  const Ciphertext b = deserialize_ciphertext(sp, load_bytes(b_path));
  save_bytes(out_path, serialize_ciphertext(sp.ring, sch.eval_add(a, b)));
  std::cout << "wrote " << out_path << "\n";
  return 0;
}

int run_mul(const GlobalOpts& g, const std::string& a_path,
            const std::string& b_path, const std::string& out_path) {
  const SchemeParams sp = load_params(g);
  Scheme sch(sp);
  const Ciphertext a = deserialize_ciphertext(sp, load_bytes(a_path));
  const Ciphertext b = deserialize_ciphertext(sp, load_bytes(b_path));
  const Ciphertext prod = sch.eval_mul_literal(a, b);
  save_bytes(out_path, serialize_ciphertext(sp.ring, prod));
  std::cout << "wrote " << out_path << " (pre-relinearization)\n";
  return 0;
}

int run_relin(const GlobalOpts& g, const std::string& rlk_path,
              const std::string& ct_path, const std::string& out_path) {
  const SchemeParams sp = load_params(g);
  Scheme sch(sp);
  const RelinKey rlk = deserialize_relin_key(sp.ring, load_bytes(rlk_path));
  const Ciphertext ct = deserialize_ciphertext(sp, load_bytes(ct_path));
  save_bytes(out_path, serialize_ciphertext(sp.ring, sch.relinearize(rlk, ct)));
  std::cout << "wrote " << out_path << "\n";
  return 0;
}

int run_modswitch(const GlobalOpts& g, std::size_t level,
                  const std::string& ct_path, const std::string& out_path) {
  const SchemeParams sp = load_params(g);
  Scheme sch(sp);
  const Ciphertext ct = deserialize_ciphertext(sp, load_bytes(ct_path));
  save_bytes(out_path, serialize_ciphertext(sp.ring, sch.mod_switch(ct, level)));
  std::cout << "wrote " << out_path << "\n";
  return 0;
}

int run_noise(const GlobalOpts& g, const std::string& sk_path,
              const std::string& ct_path, const std::string& vec_text) {
  const SchemeParams sp = load_params(g);
  Scheme sch(sp);
  const SecretKey sk = deserialize_secret_key(sp.ring, load_bytes(sk_path));
  const Ciphertext ct = deserialize_ciphertext(sp, load_bytes(ct_path));
  const Plaintext pt = sch.encode_vector(parse_vector(vec_text));
  const auto measured = sch.measure_noise(sk, ct, pt);
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < measured.size(); ++i) {
    const double sd = std::sqrt(ct.noise.var[i]);
    rows.push_back({std::to_string(i), fmt_double(measured[i]), fmt_double(sd),
                    fmt_double(6.0 * sd)});
  }
  emit_table(g, {"coordinate", "measured_inf_norm", "predicted_sd",
                 "predicted_6sd"},
             rows);
  std::cout << "predicted values are model shapes (paper big-O, C=1)\n";
  return 0;
}

int run_noise_sim(const GlobalOpts& g, const std::string& ops_text,
                  std::size_t trials) {
  const SchemeParams sp = load_params(g);
  Scheme sch(sp);
  SamplerState st = make_sampler(g);
  const KeyPair kp = sch.keygen(st);
  const RelinKey rlk = sch.relin_keygen(kp.sk, st);
  const u64 q = sp.ring.q, t = sp.ring.t;
  const u64 delta = sp.ring.delta();
  const Ring& R = sch.ring();

  std::vector<std::vector<std::string>> rows;
  std::istringstream ops(ops_text);
  std::string op;
  while (std::getline(ops, op, ',')) {
    if (op.empty()) continue;
    const auto colon = op.find(':');
    if (colon == std::string::npos)
      throw DomainError("noise-sim: ops must look like add:2 or mul:1");
    const std::string kind = op.substr(0, colon);
    const std::size_t k = std::stoull(op.substr(colon + 1));
    if (kind != "add" && kind != "mul")
      throw DomainError("noise-sim: unknown op '" + kind + "'");
    if (k == 0) throw DomainError("noise-sim: op count must be positive");

    double sum_sq = 0.0;
    std::size_t count = 0;
    NoiseEstimate predicted;
    for (std::size_t trial = 0; trial < trials; ++trial) {
      std::vector<u64> v(sp.ring.n);
      for (auto& x : v) x = st.uniform_below(t);
      Plaintext expected = sch.encode_vector(v);
      Ciphertext acc = sch.encrypt(kp.pk, expected, st);
      for (std::size_t step = 0; step < k; ++step) {
        std::vector<u64> w(sp.ring.n);
        for (auto& x : w) x = st.uniform_below(t);
        const Ciphertext next = sch.encrypt(kp.pk, sch.encode_vector(w), st);
        if (kind == "add") {
          acc = sch.eval_add(acc, next);
          for (std::size_t i = 0; i < sp.ring.n; ++i)
            expected.msg.coords[i][0] =
                add_mod(expected.msg.coords[i][0], w[i], t);
        } else {
          acc = sch.relinearize(rlk, sch.eval_mul_literal(acc, next));
          for (std::size_t i = 0; i < sp.ring.n; ++i)
            expected.msg.coords[i][0] =
                mul_mod(expected.msg.coords[i][0], w[i], t);
        }
      }
      predicted = acc.noise;
      const RingElem raw = sch.decrypt_raw(kp.sk, acc);
      const RingElem want = R.scale_coeffs(expected.msg, delta);
      for (std::size_t i = 0; i < sp.ring.n; ++i)
        for (std::size_t j = 0; j < raw.coords[i].size(); ++j) {
          const double x = static_cast<double>(
              center(sub_mod(raw.coords[i][j], want.coords[i][j], q), q));
          sum_sq += x * x;
          ++count;
        }
    }
    const double measured = sum_sq / static_cast<double>(count);
    double pred = 0.0;
    for (double x : predicted.var) pred += x;
    pred /= static_cast<double>(predicted.var.size());
    rows.push_back({op, fmt_double(pred), fmt_double(measured),
                    fmt_double(measured / pred)});
  }
  emit_table(g, {"operation", "predicted_var", "measured_var", "ratio"}, rows);
  std::cout << "predicted values are model shapes (paper big-O, C=1); "
               "mul rows report the as-stated formula against measurement\n";
  return 0;
}

int run_estimate(const GlobalOpts& g, std::size_t n, std::size_t d,
                 const std::string& attack, const std::string& constants_text) {
  double C = 1.0, omega = kDefaultOmega, c = 2.0;
  if (!constants_text.empty()) {
    std::istringstream in(constants_text);
    std::string item;
    while (std::getline(in, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos)
        throw DomainError("--constants: expected key=value");
      const std::string key = item.substr(0, eq);
      const double val = std::stod(item.substr(eq + 1));
      if (key == "C")
        C = val;
      else if (key == "omega")
        omega = val;
      else if (key == "c")
        c = val;
      else
        throw DomainError("--constants: unknown key '" + key + "'");
    }
  }
  std::vector<CostReport> reports;
  auto want = [&](const std::string& name) {
    return attack == "all" || attack == name;
  };
  if (want("bkz")) reports.push_back(cost_bkz(std::max<std::size_t>(n * d, 2), C));
  if (want("dual")) reports.push_back(cost_dual(n, d, C));
  if (want("grobner")) {
    reports.push_back(cost_grobner_step(n, d, omega));
    reports.push_back(cost_grobner_variety(n, d, C));
  }
  if (want("qsieve")) reports.push_back(cost_quantum_sieve(n * d, C));
  if (want("hybridq")) reports.push_back(cost_hybrid_quantum(n, d, C));
  if (want("qbdd")) reports.push_back(cost_qbdd(n, d, c, C));
  if (want("variety")) reports.push_back(cost_variety_lwe(n, d, C));
  if (reports.empty())
    throw DomainError("estimate: unknown attack '" + attack + "'");

  std::vector<std::vector<std::string>> rows;
  for (const auto& r : reports)
    rows.push_back({r.attack,
                    fmt_double(r.log2_cost) + (r.capped ? " (capped)" : ""),
                    r.formula});
  emit_table(g, {"attack", "log2_cost", "formula"}, rows);
  std::cout << "costs are model shapes (paper big-O, C=" << C
            << "), not concrete security claims\n";
  return 0;
}

int run_recommend(const GlobalOpts& g, int bits, bool quantum,
                  const std::string& out_path) {
  (void)g;
  const Recommendation rec = recommend_params(bits, quantum);
  std::ofstream out(out_path, std::ios::trunc);
  if (!out) throw ParseError("cannot open for writing: " + out_path);
  out << "# recommended by `vlwe recommend --bits " << bits
      << (quantum ? " --quantum" : "") << "`\n"
      << write_params_text(rec.params);
  std::cout << rec.rationale << "\n";
  for (const auto& r : rec.costs)
    std::cout << "  " << r.attack << ": " << fmt_double(r.log2_cost)
              << (r.capped ? " (capped)" : "") << " bits  [" << r.formula
              << "]\n";
  std::cout << "wrote " << out_path << "\n";
  return 0;
}

int run_bench(const GlobalOpts& g, const std::string& n_list_text,
              std::size_t d, std::size_t reps, const std::string& out_path,
              bool error_growth) {
  SamplerState st = make_sampler(g);
  std::vector<std::size_t> n_list;
  for (u64 v : parse_vector(n_list_text))
    n_list.push_back(static_cast<std::size_t>(v));
  BenchReport rep = bench_compare(n_list, d, reps, st);
  if (error_growth) {
    const std::size_t n_max = *std::max_element(n_list.begin(), n_list.end());
    rep.noise_rows = error_growth_compare(n_max, d, std::max<std::size_t>(reps, 5), st);
  }
  const std::string tsv = rep.to_tsv();
  if (!out_path.empty()) {
    std::ofstream out(out_path, std::ios::trunc);
    if (!out) throw ParseError("cannot open for writing: " + out_path);
    out << tsv;
  }
  std::cout << tsv;
  if (!out_path.empty()) std::cout << "wrote " << out_path << "\n";
  return 0;
}

int run_attack_toy(const GlobalOpts& g, const std::string& mode,
                   std::size_t samples, std::size_t trials, bool null_mode) {
  const SchemeParams sp = load_params(g);
  Scheme sch(sp);
  SamplerState st = make_sampler(g);
  if (mode == "recover") {
    std::size_t ok = 0;
    for (std::size_t run = 0; run < trials; ++run) {
      SamplerState run_st = st.fork(run);
      const RingElem s = sample_uniform_elem(sp.ring, run_st);
      std::vector<std::pair<RingElem, RingElem>> obs;
      obs.reserve(samples);
      for (std::size_t i = 0; i < samples; ++i)
        obs.push_back(sch.vlwe_sample(s, run_st));
      if (toy_key_recovery(sp.ring, obs) == s) ++ok;
    }
    std::cout << "recovered " << ok << "/" << trials << " secrets from "
              << samples << " samples each\n";
    return 0;
  }
  if (mode == "distinguish") {
    const double adv = toy_distinguisher(sp.ring, trials, st, null_mode);
    std::cout << "distinguishing advantage over " << trials << " trials: "
              << fmt_double(adv) << (null_mode ? " (uniform-vs-uniform)" : "")
              << "\n";
    return 0;
  }
  throw DomainError("attack-toy: mode must be recover or distinguish");
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"VLWE toolkit: coordinate-wise variety-ring encryption, "
               "noise analysis, attack-cost estimation, RLWE comparison"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOpts g;
  std::string seed_text;
  app.add_option("--seed", seed_text, "64-bit seed (hex or decimal)");
  auto* format_opt =
      app.add_option("--format", g.format, "output format: human or tsv")
          ->check(CLI::IsMember({"human", "tsv"}));

  // keygen
  auto* keygen = app.add_subcommand("keygen", "generate secret/public/relin keys");
  std::string kg_out;
  keygen->add_option("--params", g.params_path, "params file")->required();
  keygen->add_option("--out", kg_out, "output directory")->required();

  // encrypt
  auto* encrypt = app.add_subcommand("encrypt", "encrypt an integer vector");
  std::string enc_vec, enc_pk, enc_out;
  encrypt->add_option("--params", g.params_path, "params file")->required();
  encrypt->add_option("--vector", enc_vec, "comma-separated entries below t")
      ->required();
  encrypt->add_option("pk", enc_pk, "public key file")->required();
  encrypt->add_option("out", enc_out, "output ciphertext file")->required();

  // decrypt
  auto* decrypt = app.add_subcommand("decrypt", "decrypt to an integer vector");
  std::string dec_sk, dec_ct, dec_out;
  decrypt->add_option("--params", g.params_path, "params file")->required();
  decrypt->add_option("sk", dec_sk, "secret key file")->required();
  decrypt->add_option("ct", dec_ct, "ciphertext file")->required();
  decrypt->add_option("out", dec_out, "optional output file (default stdout)");

  // add
  auto* addcmd = app.add_subcommand("add", "homomorphic addition");
  std::string add_a, add_b, add_out;
  addcmd->add_option("--params", g.params_path, "params file")->required();
  addcmd->add_option("a", add_a)->required();
  addcmd->add_option("b", add_b)->required();
  addcmd->add_option("out", add_out)->required();

  // mul
  auto* mulcmd = app.add_subcommand(
      "mul", "coordinate-wise multiplication (leaves a pre-relin ciphertext)");
  std::string mul_a, mul_b, mul_out;
  mulcmd->add_option("--params", g.params_path, "params file")->required();
  mulcmd->add_option("a", mul_a)->required();
  mulcmd->add_option("b", mul_b)->required();
  mulcmd->add_option("out", mul_out)->required();

  // relin
  auto* relin = app.add_subcommand("relin", "relinearize a pre-relin ciphertext");
  std::string rl_key, rl_ct, rl_out;
  relin->add_option("--params", g.params_path, "params file")->required();
  relin->add_option("rlk", rl_key, "relinearization key file")->required();
  relin->add_option("ct", rl_ct)->required();
  relin->add_option("out", rl_out)->required();

  // modswitch
  auto* modswitch = app.add_subcommand("modswitch", "switch to a smaller modulus");
  std::string ms_ct, ms_out;
  std::size_t ms_level = 0;
  modswitch->add_option("--params", g.params_path, "params file")->required();
  modswitch->add_option("--level", ms_level, "target chain level")->required();
  modswitch->add_option("ct", ms_ct)->required();
  modswitch->add_option("out", ms_out)->required();

  // noise
  auto* noise = app.add_subcommand("noise", "measured vs predicted noise");
  std::string no_sk, no_ct, no_vec;
  noise->add_option("--params", g.params_path, "params file")->required();
  noise->add_option("sk", no_sk, "secret key file")->required();
  noise->add_option("ct", no_ct, "ciphertext file")->required();
  noise->add_option("--vector", no_vec, "true plaintext vector")->required();

  // noise-sim
  auto* noise_sim = app.add_subcommand("noise-sim", "Monte-Carlo noise report");
  std::string ns_ops = "add:1";
  std::size_t ns_trials = 100;
  noise_sim->add_option("--params", g.params_path, "params file")->required();
  noise_sim->add_option("--ops", ns_ops, "operations, e.g. add:4 or mul:1");
  noise_sim->add_option("--trials", ns_trials, "Monte-Carlo trials");

  // estimate
  auto* estimate = app.add_subcommand("estimate", "attack-cost table");
  std::size_t es_n = 4, es_d = 256;
  std::string es_attack = "all", es_constants;
  estimate->add_option("--n", es_n, "coordinate count")->required();
  estimate->add_option("--d", es_d, "constraint degree")->required();
  estimate->add_option("--attack", es_attack,
                       "all|bkz|dual|grobner|qsieve|hybridq|qbdd|variety");
  estimate->add_option("--constants", es_constants, "e.g. C=1,omega=2.81,c=2");

  // recommend
  auto* recommend = app.add_subcommand("recommend", "recommend parameters");
  int rc_bits = 128;
  bool rc_quantum = false;
  std::string rc_out;
  recommend->add_option("--bits", rc_bits, "security level: 128, 192, 256")
      ->required();
  recommend->add_flag("--quantum", rc_quantum, "quantum security target");
  recommend->add_option("out", rc_out, "output params file")->required();

  // bench
  auto* bench = app.add_subcommand("bench", "VLWE vs RLWE multiplication timing");
  std::string be_nlist = "1,2,4,8,16", be_out;
  std::size_t be_d = 256, be_reps = 25;
  bool be_growth = false;
  bench->add_option("--n-list", be_nlist, "coordinate counts");
  bench->add_option("--d", be_d, "coordinate degree");
  bench->add_option("--reps", be_reps, "repetitions per config (>= 5)");
  bench->add_option("--out", be_out, "TSV report path");
  bench->add_flag("--error-growth", be_growth, "also measure noise growth");

  // attack-toy
  auto* attack = app.add_subcommand("attack-toy", "toy-scale attacks");
  std::string at_mode = "recover";
  std::size_t at_samples = 10, at_trials = 100;
  bool at_null = false;
  attack->add_option("--params", g.params_path, "params file")->required();
  attack->add_option("--mode", at_mode, "recover or distinguish");
  attack->add_option("--samples", at_samples, "samples per recovery run");
  attack->add_option("--trials", at_trials, "runs (recover) or trials (distinguish)");
  attack->add_flag("--null", at_null, "uniform-vs-uniform calibration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp") {
      app.exit(e);
      return 0;
    }
    std::cerr << "error: " << e.what() << "\n\n" << app.help() << "\n";
    return 2;
  }

  if (!seed_text.empty()) g.seed_text = seed_text;
  // the simulation report is tab-separated unless a format was requested
  if (*noise_sim && format_opt->count() == 0) g.format = "tsv";

  try {
    if (*keygen) return run_keygen(g, kg_out);
    if (*encrypt) return run_encrypt(g, enc_vec, enc_pk, enc_out);
    if (*decrypt) return run_decrypt(g, dec_sk, dec_ct, dec_out);
    if (*addcmd) return run_add(g, add_a, add_b, add_out);
    if (*mulcmd) return run_mul(g, mul_a, mul_b, mul_out);
    if (*relin) return run_relin(g, rl_key, rl_ct, rl_out);
    if (*modswitch) return run_modswitch(g, ms_level, ms_ct, ms_out);
    if (*noise) return run_noise(g, no_sk, no_ct, no_vec);
    if (*noise_sim) return run_noise_sim(g, ns_ops, ns_trials);
    if (*estimate) return run_estimate(g, es_n, es_d, es_attack, es_constants);
    if (*recommend) return run_recommend(g, rc_bits, rc_quantum, rc_out);
    if (*bench) return run_bench(g, be_nlist, be_d, be_reps, be_out, be_growth);
    if (*attack) return run_attack_toy(g, at_mode, at_samples, at_trials, at_null);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  std::cerr << "error: no subcommand\n" << app.help() << "\n";
  return 2;
}
