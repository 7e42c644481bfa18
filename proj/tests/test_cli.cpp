#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "psix/errors.hpp"
#include "psix/io.hpp"
#include "psix/runner.hpp"

using namespace psix;
namespace fs = std::filesystem;

namespace {

fs::path tmpdir() {
  auto d = fs::temp_directory_path() / "psix_cli_test";
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_binary(const std::string& args) {
  const char* bin = std::getenv("PSI_EXTREMA_BIN");
  REQUIRE(bin != nullptr);
  std::string cmd = std::string(bin) + " " + args + " 2>/dev/null";
  int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WEXITSTATUS(status);
}

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("config round-trips through its own echo") {
  RunConfig a;
  a.command = Command::residuals;
  a.quantity = Quantity::mertens_product;
  a.grid_spec = "log:10:100000:12";
  a.workers = 4;
  a.format = OutFormat::jsonl;
  a.out_path = "/tmp/x.jsonl";
  a.checkpoint_path = "/tmp/x.ckpt";
  a.resume = true;
  CHECK(parse_command_line(a.echo_args()) == a);

  RunConfig b;
  b.command = Command::scan;
  b.inequality = Inequality::psi_theorem1;
  b.pmax = 1000000;
  b.precision_bits = 212;
  b.segment_size = 1 << 16;
  b.stop_after_units = 3;
  CHECK(parse_command_line(b.echo_args()) == b);

  RunConfig c;
  c.command = Command::check;
  c.inequality = Inequality::robin;
  c.n = 5040;
  CHECK(parse_command_line(c.echo_args()) == c);
}

TEST_CASE("usage errors raise ArgumentError") {
  CHECK_THROWS_AS(parse_command_line({"bogus"}), ArgumentError);
  CHECK_THROWS_AS(parse_command_line({}), ArgumentError);
  CHECK_THROWS_AS(parse_command_line({"residuals"}), ArgumentError);  // missing required
  CHECK_THROWS_AS(parse_command_line({"constants", "--precision-bits", "8"}),
                  ArgumentError);
  CHECK_THROWS_AS(parse_command_line({"constants", "--format", "xml"}), ArgumentError);
  CHECK_THROWS_AS(
      parse_command_line({"residuals", "--quantity", "psi_product", "--grid", "lin:2:1:5"}),
      ArgumentError);
}

TEST_CASE("grid parsing") {
  CHECK(parse_grid("lin:10:100:4") == std::vector<std::uint64_t>{10, 40, 70, 100});
  CHECK(parse_grid("lin:50:50:1") == std::vector<std::uint64_t>{50});
  auto g = parse_grid("log:10:1000:3");
  CHECK(g == std::vector<std::uint64_t>{10, 100, 1000});
  // rounding collisions are deduplicated, order stays strict
  auto dense = parse_grid("log:10:12:40");
  for (std::size_t i = 1; i < dense.size(); ++i) CHECK(dense[i] > dense[i - 1]);
  CHECK_THROWS_AS(parse_grid("lin:10:100"), ArgumentError);
  CHECK_THROWS_AS(parse_grid("geom:10:100:4"), ArgumentError);
  CHECK_THROWS_AS(parse_grid("lin:1:100:4"), ArgumentError);  // lo < 3
  CHECK_THROWS_AS(parse_grid("lin:abc:100:4"), ArgumentError);
}

TEST_CASE("fnv1a64 reference values") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
}

TEST_CASE("csv writer golden output") {
  auto p = tmpdir() / "golden.csv";
  {
    RowWriter w(p.string(), OutFormat::csv, {"hello"}, {"a", "b"});
    w.write_row({num_cell(std::uint64_t(7)), str_cell("x")});
    CHECK(w.rows_written() == 1);
  }
  CHECK(slurp(p) == "# hello\na,b\n7,x\n");
}

TEST_CASE("jsonl rows are valid json and omit the header") {
  auto p = tmpdir() / "rows.jsonl";
  {
    RowWriter w(p.string(), OutFormat::jsonl, {"ignored"}, {"a", "b", "v"});
    w.write_row({num_cell(std::uint64_t(7)), str_cell("x"),
                 num_cell(DD(0.5))});
    w.write_row({num_cell(std::uint64_t(8)), str_cell("y"),
                 num_cell(DD(-1.0 / 0.0))});
  }
  auto lines = lines_of(slurp(p));
  REQUIRE(lines.size() == 2);
  auto j = nlohmann::json::parse(lines[0]);
  CHECK(j["a"] == 7);
  CHECK(j["b"] == "x");
  CHECK(j["v"].is_number());
  auto j2 = nlohmann::json::parse(lines[1]);
  CHECK(j2["v"] == "-inf");  // non-finite values are quoted
}

TEST_CASE("checkpoint round trip and refusal") {
  auto p = (tmpdir() / "cp.json").string();
  Checkpoint cp;
  cp.fingerprint = "00000000deadbeef";
  cp.unit = 5;
  cp.rows = 42;
  cp.out_bytes = 1234;
  cp.state = {{"acc", dd_to_hex(dd_div(1.0, 3.0))}};
  cp.counters = {{"prev_x", 100}};
  checkpoint_save(p, cp);
  auto back = checkpoint_load(p, "00000000deadbeef");
  CHECK(back.unit == 5);
  CHECK(back.rows == 42);
  CHECK(back.out_bytes == 1234);
  CHECK(dd_from_hex(back.state_at("acc")) == dd_div(1.0, 3.0));
  CHECK(back.counter_at("prev_x") == 100);
  CHECK_THROWS_AS(checkpoint_load(p, "ffffffffffffffff"), CheckpointError);
  std::ofstream(p) << "not json";
  CHECK_THROWS_AS(checkpoint_load(p, "00000000deadbeef"), CheckpointError);
  CHECK_THROWS_AS(checkpoint_load((tmpdir() / "absent.json").string(), "x"),
                  CheckpointError);
}

TEST_CASE("identical runs produce identical bytes") {
  RunConfig cfg;
  cfg.command = Command::residuals;
  cfg.quantity = Quantity::psi_product;
  cfg.grid_spec = "log:10:100000:8";
  auto p1 = tmpdir() / "rerun1.csv";
  auto p2 = tmpdir() / "rerun2.csv";
  cfg.out_path = p1.string();
  CHECK(run(cfg) == kExitOk);
  cfg.out_path = p2.string();
  CHECK(run(cfg) == kExitOk);
  // header comment echoes the out path; data lines must be byte-identical
  auto l1 = lines_of(slurp(p1));
  auto l2 = lines_of(slurp(p2));
  REQUIRE(l1.size() == 8 + 2);  // rows + comment + header
  REQUIRE(l2.size() == l1.size());
  for (std::size_t i = 1; i < l1.size(); ++i) CHECK(l1[i] == l2[i]);
}

TEST_CASE("worker count does not change the output file") {
  // the canonical accumulation order makes the bytes invariant; header echoes
  // the worker flag so compare data lines only
  auto run_with = [&](int workers, const fs::path& p) {
    RunConfig cfg;
    cfg.command = Command::scan;
    cfg.inequality = Inequality::nicolas;
    cfg.pmax = 20000;
    cfg.workers = workers;
    cfg.segment_size = 1 << 12;
    cfg.format = OutFormat::jsonl;
    cfg.out_path = p.string();
    CHECK(run(cfg) == kExitOk);
    return slurp(p);
  };
  auto w1 = run_with(1, tmpdir() / "w1.jsonl");
  auto w4 = run_with(4, tmpdir() / "w4.jsonl");
  CHECK(w1 == w4);
  CHECK(lines_of(w1).size() == 2262);  // pi(20000)
}

TEST_CASE("csv and jsonl carry the same rows") {
  RunConfig cfg;
  cfg.command = Command::scan;
  cfg.inequality = Inequality::robin;
  cfg.nmax = 2000;
  auto pc = tmpdir() / "robin.csv";
  auto pj = tmpdir() / "robin.jsonl";
  cfg.out_path = pc.string();
  cfg.format = OutFormat::csv;
  CHECK(run(cfg) == kExitCounterexample);  // classical violators below 5041
  cfg.out_path = pj.string();
  cfg.format = OutFormat::jsonl;
  CHECK(run(cfg) == kExitCounterexample);
  auto csv_lines = lines_of(slurp(pc));
  auto jsonl_lines = lines_of(slurp(pj));
  CHECK(csv_lines.size() == jsonl_lines.size() + 2);
  CHECK(csv_lines[1] == "k,p_k,log_N,lhs,rhs,margin,verdict,precision_bits");
  // same verdict stream
  for (std::size_t i = 0; i < jsonl_lines.size(); ++i) {
    auto j = nlohmann::json::parse(jsonl_lines[i]);
    CHECK(csv_lines[i + 2].find(j["verdict"].get<std::string>()) != std::string::npos);
  }
}

TEST_CASE("interrupt and resume reproduce the uninterrupted file") {
  RunConfig base;
  base.command = Command::residuals;
  base.quantity = Quantity::harmonic_sum;
  base.grid_spec = "log:10:200000:10";

  auto full = tmpdir() / "full.csv";
  base.out_path = full.string();
  CHECK(run(base) == kExitOk);

  auto part = tmpdir() / "part.csv";
  auto ckpt = tmpdir() / "part.ckpt";
  fs::remove(ckpt);
  RunConfig stop = base;
  stop.out_path = part.string();
  stop.checkpoint_path = ckpt.string();
  stop.stop_after_units = 3;
  CHECK(run(stop) == kExitInterrupted);
  CHECK(fs::exists(ckpt));
  CHECK(lines_of(slurp(part)).size() == 3 + 2);

  RunConfig res = stop;
  res.stop_after_units = 0;
  res.resume = true;
  CHECK(run(res) == kExitOk);
  // data lines identical; headers differ only in the echoed flag line
  auto full_lines = lines_of(slurp(full));
  auto res_lines = lines_of(slurp(part));
  REQUIRE(full_lines.size() == res_lines.size());
  for (std::size_t i = 1; i < full_lines.size(); ++i) CHECK(full_lines[i] == res_lines[i]);
}

TEST_CASE("primorial scan resumes mid-stream bit-exactly") {
  RunConfig base;
  base.command = Command::scan;
  base.inequality = Inequality::psi_theorem1;
  base.pmax = 120000;  // pi = 11301 > one 8192-prime unit
  base.format = OutFormat::jsonl;

  auto full = tmpdir() / "scan_full.jsonl";
  base.out_path = full.string();
  CHECK(run(base) == kExitOk);

  auto part = tmpdir() / "scan_part.jsonl";
  auto ckpt = tmpdir() / "scan.ckpt";
  fs::remove(ckpt);
  RunConfig stop = base;
  stop.out_path = part.string();
  stop.checkpoint_path = ckpt.string();
  stop.stop_after_units = 1;
  CHECK(run(stop) == kExitInterrupted);
  CHECK(lines_of(slurp(part)).size() == 8192);

  RunConfig res = stop;
  res.stop_after_units = 0;
  res.resume = true;
  CHECK(run(res) == kExitOk);
  CHECK(slurp(full) == slurp(part));  // jsonl has no header to differ
}

TEST_CASE("pmax 10^6 scan interrupted at three random points resumes identically") {
  RunConfig base;
  base.command = Command::scan;
  base.inequality = Inequality::psi_theorem1;
  base.pmax = 1000000;  // pi = 78498 -> 9 full 8192-prime units
  base.format = OutFormat::jsonl;
  auto full = tmpdir() / "rand_full.jsonl";
  base.out_path = full.string();
  CHECK(run(base) == kExitOk);
  auto want = slurp(full);

  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::uint64_t> pick(1, 8);
  for (int trial = 0; trial < 3; ++trial) {
    auto part = tmpdir() / ("rand_part" + std::to_string(trial) + ".jsonl");
    auto ckpt = tmpdir() / ("rand" + std::to_string(trial) + ".ckpt");
    fs::remove(ckpt);
    RunConfig stop = base;
    stop.out_path = part.string();
    stop.checkpoint_path = ckpt.string();
    stop.stop_after_units = pick(rng);
    CHECK(run(stop) == kExitInterrupted);
    stop.stop_after_units = 0;
    stop.resume = true;
    CHECK(run(stop) == kExitOk);
    CHECK(slurp(part) == want);
  }
}

TEST_CASE("resume refuses a checkpoint from a different task") {
  auto out = tmpdir() / "mismatch.csv";
  auto ckpt = tmpdir() / "mismatch.ckpt";
  fs::remove(ckpt);
  RunConfig a;
  a.command = Command::residuals;
  a.quantity = Quantity::harmonic_sum;
  a.grid_spec = "log:10:100000:8";
  a.out_path = out.string();
  a.checkpoint_path = ckpt.string();
  a.stop_after_units = 2;
  CHECK(run(a) == kExitInterrupted);
  RunConfig b = a;
  b.grid_spec = "log:10:100000:9";  // different task
  b.stop_after_units = 0;
  b.resume = true;
  CHECK(run(b) == kExitError);
  // same task resumes fine
  a.stop_after_units = 0;
  a.resume = true;
  CHECK(run(a) == kExitOk);
}

TEST_CASE("checkpoint without an output file is rejected") {
  RunConfig cfg;
  cfg.command = Command::residuals;
  cfg.quantity = Quantity::harmonic_sum;
  cfg.grid_spec = "log:10:1000:3";
  cfg.checkpoint_path = (tmpdir() / "no_out.ckpt").string();
  CHECK(run(cfg) == kExitError);
  cfg.checkpoint_path.clear();
  cfg.resume = true;  // --resume without --checkpoint
  cfg.out_path = (tmpdir() / "no_ckpt.csv").string();
  CHECK(run(cfg) == kExitError);
}

TEST_CASE("binary exit codes") {
  auto out = (tmpdir() / "bin_out.csv").string();
  CHECK(run_binary("check --inequality robin --n 10080 --out " + out) == 0);
  CHECK(run_binary("check --inequality robin --n 5040 --out " + out) == 2);
  CHECK(run_binary("check --inequality nicolas --primorial-k 10 --out " + out) == 0);
  CHECK(run_binary("definitely-not-a-command") == 64);
  CHECK(run_binary("scan --inequality robin") == 1);  // missing --nmax at run time
  CHECK(run_binary("constants --out " + out) == 0);
  auto body = slurp(out);
  CHECK(body.find("gamma") != std::string::npos);
  CHECK(body.find("B1") != std::string::npos);
  CHECK(body.find("6e^gamma/pi^2") != std::string::npos);
}
