// End-to-end checks against the built CLI binary: exit codes, file
// round trips, and the determinism contract.

#include "vlwe/serialize.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

std::string cli() { return VLWE_CLI_PATH; }

int run(const std::string& args, std::string* out = nullptr) {
  const std::string out_file =
      (fs::temp_directory_path() / "vlwe_cli_out.txt").string();
  const std::string cmd = cli() + " " + args + " >" + out_file + " 2>&1";
  const int rc = std::system(cmd.c_str());
  if (out) {
    std::ifstream in(out_file);
    std::ostringstream ss;
    ss << in.rdbuf();
    *out = ss.str();
  }
  return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / "vlwe_cli_test";
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    params_ = (dir_ / "p.vlwe").string();
    std::ofstream p(params_);
    p << "n=4\nd=16\nq=" << vlwe::find_ntt_prime(16, 1ull << 30)
      << "\nt=257\nsigma=3.2\nn_lwe=1\nm=2\n";
  }

  std::string in_dir(const std::string& name) const {
    return (dir_ / name).string();
  }

  fs::path dir_;
  std::string params_;
};

} // namespace

TEST_F(CliTest, NoArgsIsUsageError) {
  std::string out;
  EXPECT_EQ(run("", &out), 2);
  EXPECT_NE(out.find("Usage"), std::string::npos);
}

TEST_F(CliTest, UnknownSubcommandIsUsageError) {
  EXPECT_EQ(run("frobnicate"), 2);
}

TEST_F(CliTest, HelpExitsZero) {
  std::string out;
  EXPECT_EQ(run("--help", &out), 0);
  for (const char* sub : {"keygen", "encrypt", "decrypt", "add", "mul",
                          "relin", "modswitch", "noise-sim", "estimate",
                          "recommend", "bench", "attack-toy"})
    EXPECT_NE(out.find(sub), std::string::npos) << sub;
}

TEST_F(CliTest, KeygenDeterminism) {
  ASSERT_EQ(run("--seed 0xDEAD keygen --params " + params_ + " --out " +
                in_dir("k1")),
            0);
  ASSERT_EQ(run("--seed 0xDEAD keygen --params " + params_ + " --out " +
                in_dir("k2")),
            0);
  for (const char* f : {"secret.key", "public.key", "relin.key"}) {
    EXPECT_EQ(slurp(dir_ / "k1" / f), slurp(dir_ / "k2" / f)) << f;
    EXPECT_FALSE(slurp(dir_ / "k1" / f).empty());
  }
}

TEST_F(CliTest, EncryptDecryptRoundTrip) {
  ASSERT_EQ(run("--seed 1 keygen --params " + params_ + " --out " +
                in_dir("keys")),
            0);
  ASSERT_EQ(run("--seed 2 encrypt --params " + params_ +
                " --vector 3,5,2,7 " + in_dir("keys/public.key") + " " +
                in_dir("ct.bin")),
            0);
  std::string out;
  ASSERT_EQ(run("decrypt --params " + params_ + " " +
                in_dir("keys/secret.key") + " " + in_dir("ct.bin"), &out),
            0);
  EXPECT_NE(out.find("3,5,2,7"), std::string::npos);
}

TEST_F(CliTest, AddViaFiles) {
  ASSERT_EQ(run("--seed 1 keygen --params " + params_ + " --out " +
                in_dir("keys")),
            0);
  ASSERT_EQ(run("--seed 2 encrypt --params " + params_ + " --vector 1,2,3,4 " +
                in_dir("keys/public.key") + " " + in_dir("a.bin")),
            0);
  ASSERT_EQ(run("--seed 3 encrypt --params " + params_ +
                " --vector 10,20,30,40 " + in_dir("keys/public.key") + " " +
                in_dir("b.bin")),
            0);
  ASSERT_EQ(run("add --params " + params_ + " " + in_dir("a.bin") + " " +
                in_dir("b.bin") + " " + in_dir("sum.bin")),
            0);
  std::string out;
  ASSERT_EQ(run("decrypt --params " + params_ + " " +
                in_dir("keys/secret.key") + " " + in_dir("sum.bin"), &out),
            0);
  EXPECT_NE(out.find("11,22,33,44"), std::string::npos);
}

TEST_F(CliTest, MulRelinNoiseFlow) {
  ASSERT_EQ(run("--seed 1 keygen --params " + params_ + " --out " +
                in_dir("keys")),
            0);
  ASSERT_EQ(run("--seed 2 encrypt --params " + params_ + " --vector 1,2,3,4 " +
                in_dir("keys/public.key") + " " + in_dir("a.bin")),
            0);
  ASSERT_EQ(run("--seed 3 encrypt --params " + params_ + " --vector 5,6,7,8 " +
                in_dir("keys/public.key") + " " + in_dir("b.bin")),
            0);
  ASSERT_EQ(run("mul --params " + params_ + " " + in_dir("a.bin") + " " +
                in_dir("b.bin") + " " + in_dir("prod.bin")),
            0);
  ASSERT_EQ(run("relin --params " + params_ + " " +
                in_dir("keys/relin.key") + " " + in_dir("prod.bin") + " " +
                in_dir("rel.bin")),
            0);
  // relinearizing twice is a domain error -> exit 1
  EXPECT_EQ(run("relin --params " + params_ + " " + in_dir("keys/relin.key") +
                " " + in_dir("rel.bin") + " " + in_dir("rel2.bin")),
            1);
  std::string out;
  ASSERT_EQ(run("noise --params " + params_ + " --vector 1,2,3,4 " +
                in_dir("keys/secret.key") + " " + in_dir("a.bin"), &out),
            0);
  EXPECT_NE(out.find("measured_inf_norm"), std::string::npos);
}

TEST_F(CliTest, ModSwitchFlow) {
  // params with a two-level chain
  const std::string chained = in_dir("chained.vlwe");
  {
    std::ofstream p(chained);
    const vlwe::u64 q0 = vlwe::find_ntt_prime(16, 1ull << 30);
    const vlwe::u64 q1 = vlwe::find_ntt_prime(16, 1ull << 20);
    p << "n=4\nd=16\nq=" << q0 << "\nt=257\nsigma=3.2\nn_lwe=1\nm=2\n"
      << "modulus_chain=" << q0 << "," << q1 << "\n";
  }
  ASSERT_EQ(run("--seed 1 keygen --params " + chained + " --out " +
                in_dir("keys")),
            0);
  ASSERT_EQ(run("--seed 2 encrypt --params " + chained + " --vector 9,9,9,9 " +
                in_dir("keys/public.key") + " " + in_dir("ct.bin")),
            0);
  ASSERT_EQ(run("modswitch --params " + chained + " --level 1 " +
                in_dir("ct.bin") + " " + in_dir("low.bin")),
            0);
  std::string out;
  ASSERT_EQ(run("decrypt --params " + chained + " " +
                in_dir("keys/secret.key") + " " + in_dir("low.bin"), &out),
            0);
  EXPECT_NE(out.find("9,9,9,9"), std::string::npos);
}

TEST_F(CliTest, BadInputsExitOne) {
  // corrupt params file
  const std::string bad = in_dir("bad.vlwe");
  {
    std::ofstream p(bad);
    p << "n=4\nd=16\nq=18\nt=257\nsigma=3.2\n"; // even non-power-of-two q
  }
  EXPECT_EQ(run("keygen --params " + bad + " --out " + in_dir("x")), 1);
  // corrupted ciphertext magic
  ASSERT_EQ(run("--seed 1 keygen --params " + params_ + " --out " +
                in_dir("keys")),
            0);
  ASSERT_EQ(run("--seed 2 encrypt --params " + params_ + " --vector 1,1,1,1 " +
                in_dir("keys/public.key") + " " + in_dir("ct.bin")),
            0);
  auto bytes = vlwe::load_bytes(in_dir("ct.bin"));
  bytes[0] = 'X';
  vlwe::save_bytes(in_dir("ct_bad.bin"), bytes);
  EXPECT_EQ(run("decrypt --params " + params_ + " " +
                in_dir("keys/secret.key") + " " + in_dir("ct_bad.bin")),
            1);
  // plaintext entry out of range
  EXPECT_EQ(run("--seed 2 encrypt --params " + params_ +
                " --vector 300,0,0,0 " + in_dir("keys/public.key") + " " +
                in_dir("ct2.bin")),
            1);
}

TEST_F(CliTest, EstimateAndRecommend) {
  std::string out;
  ASSERT_EQ(run("estimate --n 4 --d 8 --attack variety --format tsv", &out), 0);
  EXPECT_NE(out.find("variety-lwe\t10"), std::string::npos);
  ASSERT_EQ(run("recommend --bits 128 " + in_dir("rec.vlwe"), &out), 0);
  const vlwe::SchemeParams sp = vlwe::load_params_file(in_dir("rec.vlwe"));
  EXPECT_EQ(sp.ring.degree(0), 256u);
}

TEST_F(CliTest, NoiseSimAndAttackToy) {
  std::string out;
  ASSERT_EQ(run("--seed 5 noise-sim --params " + params_ +
                " --ops add:2 --trials 50 --format tsv", &out),
            0);
  EXPECT_NE(out.find("operation\tpredicted_var\tmeasured_var\tratio"),
            std::string::npos);

  const std::string toy = in_dir("toy.vlwe");
  {
    std::ofstream p(toy);
    p << "n=1\nd=2\nq=17\nt=5\nsigma=1.0\nn_lwe=1\nm=2\n";
  }
  ASSERT_EQ(run("--seed 6 attack-toy --params " + toy +
                " --mode recover --samples 10 --trials 20", &out),
            0);
  EXPECT_NE(out.find("/20 secrets"), std::string::npos);
  ASSERT_EQ(run("--seed 7 attack-toy --params " + toy +
                " --mode distinguish --trials 100 --null", &out),
            0);
  EXPECT_NE(out.find("advantage"), std::string::npos);
}

TEST_F(CliTest, BenchSmoke) {
  std::string out;
  ASSERT_EQ(run("--seed 8 bench --n-list 1,2 --d 16 --reps 5 --out " +
                in_dir("bench.tsv"), &out),
            0);
  EXPECT_NE(slurp(dir_ / "bench.tsv").find("vlwe-mul n=1 d=16"),
            std::string::npos);
}
