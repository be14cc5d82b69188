#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include "cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;

  json out_json() const { return json::parse(out); }
  json err_json() const { return json::parse(err); }
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Outcome o;
  o.code = nlstab::cli::run(args, out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("nlstab-cli-" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("constants") {
  const Outcome o = run({"constants", "--n", "2", "--s", "0.5", "--eps", "0.1"});
  REQUIRE(o.code == 0);
  const json j = o.out_json();
  CHECK(j.at("gamma_ns").get<double>() == doctest::Approx(0.63661977236758134));
  CHECK(j.at("gamma_nse").get<double>() == doctest::Approx(0.66655707921528841));
  CHECK(j.at("s") == "0.5");
  CHECK(o.err.empty());
}

TEST_CASE("critical plane of the ball") {
  const Outcome o = run({"critical-plane", "--domain", "ball"});
  REQUIRE(o.code == 0);
  const json j = o.out_json();
  CHECK(std::abs(j.at("plane").at("lambda").get<double>()) < 1e-6);
  CHECK(j.at("plane").at("Lambda").get<double>() == doctest::Approx(1.0));
}

TEST_CASE("validation failures exit with 2 and an error object") {
  Outcome o = run({"constants", "--s", "1.5"});
  CHECK(o.code == 2);
  CHECK(o.err_json().at("error").at("code") == "parameter_domain");
  CHECK(o.out.empty());

  o = run({"constants", "--frobnicate", "1"});
  CHECK(o.code == 2);
  CHECK(o.err_json().at("error").at("code") == "usage");

  o = run({"no-such-command"});
  CHECK(o.code == 2);

  o = run({"critical-plane", "--domain", "bump", "--eps", "0.4"});
  CHECK(o.code == 2);
  CHECK(o.err_json().at("error").at("code") == "eps_out_of_range");

  const fs::path dir = scratch("unwritable");
  std::ofstream(dir / "file") << "x";
  o = run({"counterexample-scan", "--eps", "1e-3,1e-4,1e-5", "--out", (dir / "file" / "sub").string()});
  CHECK(o.code == 2);
  CHECK(o.err_json().at("error").at("code") == "io");
  fs::remove_all(dir);
}

TEST_CASE("help") {
  const Outcome o = run({"--help"});
  CHECK(o.code == 0);
  for (const std::string& c : nlstab::cli::commands()) CHECK(o.out.find(c) != std::string::npos);
}

TEST_CASE("config file values override flags") {
  const fs::path dir = scratch("config");
  std::ofstream(dir / "c.json") << R"({"params": {"eps": ["1e-3", "1e-4", "1e-5"], "gamma": 0.1}, "seed": 3})";
  const Outcome o = run({"counterexample-scan", "--gamma", "0.2", "--config", (dir / "c.json").string(),
                         "--out", dir.string()});
  REQUIRE(o.code == 0);
  const json j = o.out_json();
  CHECK(j.at("config").at("gamma") == "0.1");
  CHECK(j.at("config").at("seed") == 3);
  CHECK(j.at("config").at("eps").size() == 3);
  std::ofstream(dir / "bad.json") << R"({"gamm": 0.1})";
  CHECK(run({"counterexample-scan", "--config", (dir / "bad.json").string()}).code == 2);
  CHECK(run({"counterexample-scan", "--config", (dir / "missing.json").string()}).code == 2);
  fs::remove_all(dir);
}

TEST_CASE("experiment outputs are byte-identical across runs") {
  const fs::path a = scratch("rerun-a");
  const fs::path b = scratch("rerun-b");
  const std::vector<std::string> args = {"counterexample-scan", "--method", "monte-carlo",
                                         "--samples", "20000", "--seed", "5", "--eps", "1e-3,1e-4,1e-5"};
  auto with_out = [&](const fs::path& d) {
    auto v = args;
    v.push_back("--out");
    v.push_back(d.string());
    return v;
  };
  const Outcome oa = run(with_out(a));
  const Outcome ob = run(with_out(b));
  REQUIRE(oa.code == 0);
  REQUIRE(ob.code == 0);
  const json ja = oa.out_json();
  const json jb = ob.out_json();
  CHECK(ja.at("config_hash") == jb.at("config_hash"));
  CHECK(slurp(ja.at("csv").get<std::string>()) == slurp(jb.at("csv").get<std::string>()));
  CHECK(slurp(ja.at("json").get<std::string>()) == slurp(jb.at("json").get<std::string>()));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("decimals are echoed verbatim") {
  const fs::path d = scratch("verbatim");
  const Outcome o = run({"counterexample-scan", "--eps", "1.0e-3,1e-04,0.00001", "--gamma", "0.20",
                         "--out", d.string()});
  REQUIRE(o.code == 0);
  const json j = o.out_json();
  CHECK(j.at("config").at("eps") == json({"1.0e-3", "1e-04", "0.00001"}));
  CHECK(j.at("config").at("gamma") == "0.20");
  const std::string csv = slurp(j.at("csv").get<std::string>());
  CHECK(csv.find("\n1.0e-3,") != std::string::npos);
  CHECK(csv.find("\n1e-04,") != std::string::npos);
  fs::remove_all(d);
}

TEST_CASE("default counterexample scan shows the square-root law") {
  const fs::path d = scratch("scan");
  const Outcome o = run({"counterexample-scan", "--alpha", "2", "--out", d.string()});
  REQUIRE(o.code == 0);
  const json s = o.out_json().at("summary");
  CHECK(s.at("fit_lambda").at("slope").get<double>() == doctest::Approx(0.5).epsilon(0.02));
  CHECK(s.at("fit_slab").at("slope").get<double>() == doctest::Approx(0.5).epsilon(0.02));
  CHECK(s.at("lambda_lower_bound_holds") == true);
  fs::remove_all(d);
}

TEST_CASE("run config round trip") {
  nlstab::cli::RunConfig c;
  c.command = "slab-measure";
  c.params = {{"eps", "1e-4"}, {"gamma", "0.10"}};
  c.seed = 17;
  c.output_path = "/tmp/out";
  const json j = nlstab::cli::to_json(c);
  const nlstab::cli::RunConfig back = nlstab::cli::run_config_from_json(json::parse(j.dump()));
  CHECK(back.command == c.command);
  CHECK(back.params == c.params);
  CHECK(back.seed == 17);
  CHECK(back.output_path == c.output_path);
  CHECK(nlstab::cli::to_json(back) == j);
}

TEST_CASE("installed binary reports exit codes") {
  const std::string tool = NLSTAB_TOOL_PATH;
  const std::string quiet = " >/dev/null 2>&1";
  CHECK(std::system((tool + " constants" + quiet).c_str()) == 0);
  const int rc = std::system((tool + " constants --s 2" + quiet).c_str());
  CHECK(WEXITSTATUS(rc) == 2);
}
