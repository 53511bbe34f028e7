#include <gtest/gtest.h>

#include <openssl/evp.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"

namespace fs = std::filesystem;
using beiterlab::cli::run;

namespace {

struct Result {
  int code = 0;
  std::string out, err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  Result r;
  r.code = run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) v.push_back(l);
  return v;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("beiterlab_cli_test_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(Cli, Beiter239) {
  const auto r = call({"beiter", "239"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 20u);
  EXPECT_EQ(l[0], "side,beta,betabar");
  EXPECT_EQ(l[1], "plus,90,162");
  EXPECT_EQ(l[2], "minus,94,89");
  EXPECT_EQ(l.back(), "minus,118,79");
}

TEST(Cli, BeiterSevenIsEmptyWithSvg) {
  const auto svg = scratch("b7.svg");
  const auto r = call({"beiter", "7", "--svg", svg.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(lines(r.out).size(), 1u);
  const auto body = slurp(svg);
  EXPECT_NE(body.find("<svg"), std::string::npos);
  EXPECT_NE(body.find("</svg>"), std::string::npos);
  EXPECT_EQ(body.find("<circle"), std::string::npos);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(call({"beiter", "4"}).code, 2);
  EXPECT_EQ(call({"coeffs", "1"}).code, 2);
  EXPECT_EQ(call({"nosuchcommand"}).code, 2);
  EXPECT_EQ(call({}).code, 2);
  EXPECT_EQ(call({"sweep", "nokind", "3", "5"}).code, 2);
  EXPECT_EQ(call({"bfi", "100000", "2", "1", "2", "0.5"}).code, 2);
  EXPECT_EQ(call({"count", "11"}).code, 2);
}

TEST(Cli, HelpAndVersion) {
  const auto h = call({"--help"});
  EXPECT_EQ(h.code, 0);
  EXPECT_NE(h.out.find("counterexample"), std::string::npos);
  const auto v = call({"--version"});
  EXPECT_EQ(v.code, 0);
  EXPECT_NE(v.out.find(beiterlab::cli::kVersion), std::string::npos);
}

TEST(Cli, Coeffs) {
  const auto r = call({"coeffs", "105"});
  ASSERT_EQ(r.code, 0);
  const auto l = lines(r.out);
  EXPECT_EQ(l[0], "k,coeff");
  EXPECT_EQ(l.size(), 50u);  // degree 48
  EXPECT_EQ(l[8], "7,-2");
  EXPECT_EQ(lines(call({"coeffs", "7"}).out).size(), 8u);
}

TEST(Cli, Height) {
  const auto r = call({"height", "105"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(lines(r.out)[1], "105,105,2,7");
}

TEST(Cli, CounterexampleNotFound) {
  const auto r = call({"counterexample", "7"});
  EXPECT_EQ(r.code, 3);
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 2u);
  EXPECT_EQ(l[1].rfind("NOTFOUND,7,", 0), 0u);
}

TEST(Cli, CounterexampleEleven) {
  const auto r = call({"counterexample", "11"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 2u);
  EXPECT_EQ(l[0], "p,q,r,n,value,beta,side,verified");
  std::vector<std::string> f;
  std::istringstream in(l[1]);
  for (std::string c; std::getline(in, c, ',');) f.push_back(c);
  ASSERT_EQ(f.size(), 8u);
  EXPECT_EQ(std::abs(std::stoll(f[4])), 7);
  EXPECT_EQ(f[7], "1");
}

TEST(Cli, Mpq) {
  const auto r = call({"mpq", "3", "5"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(lines(r.out)[1].rfind("3,5,2,residue,", 0), 0u);
}

TEST(Cli, KloostermanAndCount) {
  const auto k = call({"kloosterman", "13", "1", "0"});
  ASSERT_EQ(k.code, 0);
  EXPECT_EQ(lines(k.out)[1].rfind("1,0,13,-1,", 0), 0u);
  const auto c = call({"count", "5", "--rect", "0", "2", "0", "3"});
  ASSERT_EQ(c.code, 0) << c.err;
  EXPECT_EQ(lines(c.out)[0], "region,count,area_over_p,residual");
  EXPECT_NE(lines(c.out)[1].find(",2,6/5,"), std::string::npos);
}

TEST(Cli, BfiSummary) {
  const auto r = call({"bfi"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(lines(r.out)[0], "p,q,m,m_prime,case,a,b,x,y,membership");
  EXPECT_NE(r.err.find("PASS"), std::string::npos);
}

TEST(Cli, SqrtGap) {
  const auto r = call({"sqrtgap", "1000"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(lines(r.out)[0], "p,points,min_a,min_a_over_sqrt_p,congruence_ok");
}

TEST(Cli, SweepOutputDoesNotDependOnJobs) {
  for (const std::vector<std::string>& args :
       {std::vector<std::string>{"sweep", "theorem1", "3", "3000"}, {"sweep", "rect-lemma", "101", "400", "--samples", "50"},
        {"sweep", "tri-lemma", "101", "300", "--samples", "40"}, {"sweep", "bzdega", "3", "50", "--n-max", "30000"},
        {"sweep", "theorem2", "3", "2000"}, {"sweep", "weil", "3", "60"}}) {
    auto one = args, many = args;
    one.insert(one.end(), {"--jobs", "1"});
    many.insert(many.end(), {"--jobs", "8"});
    const auto a = call(one), b = call(many);
    ASSERT_EQ(a.code, 0) << args[1] << ": " << a.err;
    ASSERT_EQ(b.code, 0);
    EXPECT_EQ(a.out, b.out) << args[1];
    EXPECT_GT(lines(a.out).size(), 1u);
  }
}

TEST(Cli, SeedChangesSampledSweeps) {
  const auto a = call({"sweep", "rect-lemma", "101", "200", "--samples", "20", "--seed", "1"});
  const auto b = call({"sweep", "rect-lemma", "101", "200", "--samples", "20", "--seed", "2"});
  EXPECT_NE(a.out, b.out);
}

TEST(Cli, ManifestRecordsOutputs) {
  const auto out = scratch("b239.csv");
  const auto svg = scratch("b239.svg");
  const auto r = call({"--jobs", "2", "--out", out.string(), "beiter", "239", "--svg", svg.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  const auto m = nlohmann::json::parse(slurp(out.string() + ".manifest.json"));
  EXPECT_EQ(m["command"], "beiter");
  EXPECT_EQ(m["jobs"], 2);
  EXPECT_EQ(m["version"], beiterlab::cli::kVersion);
  EXPECT_EQ(m["exit_code"], 0);
  ASSERT_EQ(m["outputs"].size(), 2u);
  const auto csv = slurp(out);
  EXPECT_EQ(m["outputs"][0]["bytes"], csv.size());
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned len = 0;
  EVP_Digest(csv.data(), csv.size(), md, &len, EVP_sha256(), nullptr);
  std::string hex;
  char buf[3];
  for (unsigned i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  EXPECT_EQ(m["outputs"][0]["sha256"], hex);
  EXPECT_EQ(m["outputs"][1]["path"], svg.string());

  const auto explicit_path = scratch("m.json");
  ASSERT_EQ(call({"coeffs", "15", "--manifest", explicit_path.string()}).code, 0);
  EXPECT_EQ(nlohmann::json::parse(slurp(explicit_path))["parameters"]["n"], 15);
}

TEST(Cli, ManifestOnStderrByDefault) {
  const auto r = call({"coeffs", "15"});
  const auto l = lines(r.err);
  ASSERT_FALSE(l.empty());
  const auto m = nlohmann::json::parse(l.back());
  EXPECT_EQ(m["outputs"][0]["path"], "-");
}
