#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "optcap/report_io.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path tmp_dir() {
  const fs::path dir = fs::path(OPTCAP_TEST_TMP) / "cli";
  fs::create_directories(dir);
  return dir;
}

fs::path write_config(const std::string& name, const json& doc) {
  const fs::path p = tmp_dir() / name;
  std::ofstream(p) << doc.dump(2);
  return p;
}

Result run(const std::string& args) {
  const fs::path out = tmp_dir() / "stdout.txt";
  const fs::path err = tmp_dir() / "stderr.txt";
  const std::string cmd = std::string("\"") + OPTCAP_CLI_PATH + "\" " + args + " >\"" + out.string() +
                          "\" 2>\"" + err.string() + "\"";
  const int status = std::system(cmd.c_str());
  Result r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

json geometry(double r, double l) {
  return {{"wavelength", 1e-6}, {"object_distance", 100.0}, {"image_distance", 100.0},
          {"pupil_radius", r},  {"patch_side", l}};
}

// Lens F ~ 3e-4, F_fs = 2.5e-5.
json farfield_config() {
  return {{"scenario", "lens"},
          {"geometry", geometry(1e-3, 1e-3)},
          {"grid", {{"initial_order", 8}, {"max_order", 16}, {"rtol", 1e-4}}},
          {"budget", {{"N", 10.0}}}};
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("help and usage errors") {
  CHECK(run("--help").code == 0);
  const Result none = run("");
  CHECK(none.code == 2);
  const Result missing = run("classify");
  CHECK(missing.code == 2);
  CHECK(missing.err.find("--config") != std::string::npos);
  CHECK(run("classify --help").out.find("meters") != std::string::npos);
}

TEST_CASE("classify reports the intermediate regime at F = pi") {
  json cfg = farfield_config();
  cfg["geometry"] = geometry(1e-2, 1e-2);
  const fs::path p = write_config("pi.json", cfg);
  const Result r = run("classify --json --config \"" + p.string() + "\"");
  REQUIRE(r.code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc.at("F").get<double>() == doctest::Approx(3.141592653589793).epsilon(1e-12));
  CHECK(doc.at("lens_regime") == "Intermediate");
  CHECK(doc.at("gain_formula") == "none");
  const Result text = run("classify --config \"" + p.string() + "\"");
  CHECK(text.code == 0);
  CHECK(text.out.find("ntermediate") != std::string::npos);
}

TEST_CASE("malformed config names the field and exits 2") {
  json cfg = farfield_config();
  cfg["geometry"]["wavelength"] = "green";
  const Result r = run("classify --config \"" + write_config("bad.json", cfg).string() + "\"");
  CHECK(r.code == 2);
  CHECK(r.err.find("geometry.wavelength") != std::string::npos);
  CHECK(run("classify --config /nonexistent.json").code == 2);
  CHECK(run("spectrum --grid-order 2 --config \"" + write_config("ok.json", farfield_config()).string() + "\"")
            .code == 2);
}

TEST_CASE("spectrum then capacity round trips") {
  const fs::path cfg = write_config("ff.json", farfield_config());
  const fs::path csv = tmp_dir() / "spectrum.csv";
  const Result s = run("spectrum --config \"" + cfg.string() + "\" --out \"" + csv.string() + "\"");
  REQUIRE(s.code == 0);
  const json meta = json::parse(slurp(csv.string() + ".meta.json"));
  CHECK(meta.at("converged") == true);
  CHECK(meta.at("scenario") == "lens");

  const Result direct = run("capacity --json --config \"" + cfg.string() + "\"");
  REQUIRE(direct.code == 0);

  json from_file = farfield_config();
  from_file.erase("geometry");
  from_file["spectrum_file"] = csv.string();
  const Result loaded = run("capacity --json --config \"" + write_config("ff_file.json", from_file).string() + "\"");
  REQUIRE(loaded.code == 0);

  auto total = [](const std::string& out) {
    const std::size_t brace = out.find('{');
    return json::parse(out.substr(brace)).at("total_nats").get<double>();
  };
  const double a = total(direct.out);
  const double b = total(loaded.out);
  CHECK(std::abs(a - b) <= 1e-12 * std::abs(a));
  CHECK(direct.out.find("# closed_form") != std::string::npos);
  CHECK(loaded.out.find("# closed_form") == std::string::npos);
}

TEST_CASE("runs are deterministic") {
  const fs::path cfg = write_config("det.json", farfield_config());
  const Result a = run("spectrum --config \"" + cfg.string() + "\" --seed 1");
  const Result b = run("spectrum --config \"" + cfg.string() + "\" --seed 99");
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.rfind("k,sigma,eta\n", 0) == 0);
}

TEST_CASE("unconverged spectra are written and exit 3") {
  json cfg = farfield_config();
  cfg["grid"] = {{"initial_order", 4}, {"max_order", 4}, {"rtol", 1e-14}};
  const fs::path out = tmp_dir() / "unconv.csv";
  const Result r =
      run("spectrum --config \"" + write_config("unconv.json", cfg).string() + "\" --out \"" + out.string() + "\"");
  CHECK(r.code == 3);
  CHECK(r.err.find("not converged") != std::string::npos);
  CHECK(fs::file_size(out) > 0);
}

TEST_CASE("an unphysical discretization exits 4") {
  // A wide screen resolved by a 4-point pupil rule overshoots eta = 1.
  json cfg = farfield_config();
  cfg["scenario"] = "hole";
  cfg["geometry"] = geometry(0.1, std::sqrt(2e-5));
  cfg["grid"] = {{"initial_order", 8}, {"max_order", 8}, {"pupil_order", 4}, {"pupil_angular_order", 4}};
  const Result r = run("spectrum --config \"" + write_config("unphys.json", cfg).string() + "\"");
  CHECK(r.code == 4);
  CHECK(r.err.find("error:") != std::string::npos);
}

TEST_CASE("self comparison has unit gain") {
  json cfg = farfield_config();
  cfg["budget"] = {{"sweep", {{"min", 1e-3}, {"max", 1e3}, {"points", 4}}}};
  cfg["compare"] = {{"subject", "lens"}, {"reference", "lens"}};
  const Result r = run("compare --json --config \"" + write_config("self.json", cfg).string() + "\"");
  REQUIRE(r.code == 0);
  const json rows = json::parse(r.out.substr(r.out.find('[')));
  REQUIRE(rows.size() == 4);
  for (const json& row : rows) {
    CHECK(row.at("gain").get<double>() == 1.0);
    CHECK(row.at("method") == "numerical");
  }
}

TEST_CASE("compare interleaves numerical and closed-form rows") {
  json cfg = farfield_config();
  cfg["budget"] = {{"sweep", {{"min", 1e-2}, {"max", 1e2}, {"points", 3}}}};
  const Result r = run("compare --config \"" + write_config("cmp.json", cfg).string() + "\"");
  REQUIRE(r.code == 0);
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "N,C_lens_nats,C_fs_nats,gain,method,converged");
  int n = 0;
  while (std::getline(lines, line)) {
    CHECK(line.find(n % 2 ? ",closed-form,true" : ",numerical,true") != std::string::npos);
    ++n;
  }
  CHECK(n == 6);
}

TEST_CASE("compare outside every regime needs --force") {
  json cfg = farfield_config();
  cfg["geometry"] = geometry(1e-2, 1e-2);
  cfg["grid"] = {{"initial_order", 8}, {"max_order", 8}};
  const fs::path p = write_config("force.json", cfg);
  const Result refused = run("compare --config \"" + p.string() + "\"");
  CHECK(refused.code == 2);
  CHECK(refused.err.find("--force") != std::string::npos);
  const Result forced = run("compare --force --config \"" + p.string() + "\"");
  CHECK((forced.code == 0 || forced.code == 3));
  CHECK(forced.err.find("warning") != std::string::npos);
  CHECK(forced.out.find(",closed-form,false") != std::string::npos);
}

}
