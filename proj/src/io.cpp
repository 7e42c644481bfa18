#include "psix/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "psix/errors.hpp"

namespace psix {

const char* command_name(Command c) {
  switch (c) {
    case Command::constants: return "constants";
    case Command::residuals: return "residuals";
    case Command::scan: return "scan";
    case Command::check: return "check";
    case Command::ramanujan: return "ramanujan";
    case Command::ca: return "ca";
  }
  return "?";
}

const char* format_name(OutFormat f) {
  return f == OutFormat::csv ? "csv" : "jsonl";
}

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::vector<std::uint64_t> parse_grid(const std::string& spec) {
  auto fail = [&] { throw ArgumentError("bad grid spec (want <lin|log>:<lo>:<hi>:<points>): " + spec); };
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (true) {
    auto next = spec.find(':', pos);
    parts.push_back(spec.substr(pos, next - pos));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  if (parts.size() != 4) fail();
  bool logscale = parts[0] == "log";
  if (!logscale && parts[0] != "lin") fail();
  double lo = 0, hi = 0;
  long points = 0;
  try {
    lo = std::stod(parts[1]);
    hi = std::stod(parts[2]);
    points = std::stol(parts[3]);
  } catch (const std::exception&) {
    fail();
  }
  if (!(lo >= 3 && hi >= lo && points >= 1)) fail();
  std::vector<std::uint64_t> grid;
  for (long i = 0; i < points; ++i) {
    double t = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
    double v = logscale ? std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo)))
                        : lo + t * (hi - lo);
    auto x = static_cast<std::uint64_t>(std::llround(v));
    if (grid.empty() || x > grid.back()) grid.push_back(x);
  }
  return grid;
}

std::vector<std::string> RunConfig::echo_args() const {
  std::vector<std::string> a;
  a.push_back(command_name(command));
  if (inequality) a.insert(a.end(), {"--inequality", inequality_name(*inequality)});
  if (quantity) a.insert(a.end(), {"--quantity", quantity_name(*quantity)});
  if (pmax) a.insert(a.end(), {"--pmax", std::to_string(pmax)});
  if (nmax) a.insert(a.end(), {"--nmax", std::to_string(nmax)});
  if (!grid_spec.empty()) a.insert(a.end(), {"--grid", grid_spec});
  if (primorial_k) a.insert(a.end(), {"--primorial-k", std::to_string(primorial_k)});
  if (n) a.insert(a.end(), {"--n", std::to_string(n)});
  if (ramanujan_q) a.insert(a.end(), {"--Q", std::to_string(ramanujan_q)});
  if (ca_count) a.insert(a.end(), {"--count", std::to_string(ca_count)});
  a.insert(a.end(), {"--precision-bits", std::to_string(precision_bits)});
  a.insert(a.end(), {"--workers", std::to_string(workers)});
  a.insert(a.end(), {"--format", format_name(format)});
  if (segment_size) a.insert(a.end(), {"--segment-size", std::to_string(segment_size)});
  if (!out_path.empty()) a.insert(a.end(), {"--out", out_path});
  if (!checkpoint_path.empty()) a.insert(a.end(), {"--checkpoint", checkpoint_path});
  if (resume) a.push_back("--resume");
  if (stop_after_units) a.insert(a.end(), {"--stop-after-units", std::to_string(stop_after_units)});
  return a;
}

std::string RunConfig::echo() const {
  std::string s;
  for (const auto& a : echo_args()) {
    if (!s.empty()) s += ' ';
    s += a;
  }
  return s;
}

std::string RunConfig::canonical_task() const {
  // excludes output/checkpoint paths, workers and test hooks: those must not
  // change the mathematical result
  std::string s = "v1|";
  s += command_name(command);
  if (inequality) s += std::string("|ineq=") + inequality_name(*inequality);
  if (quantity) s += std::string("|q=") + quantity_name(*quantity);
  s += "|pmax=" + std::to_string(pmax);
  s += "|nmax=" + std::to_string(nmax);
  s += "|grid=" + grid_spec;
  s += "|k=" + std::to_string(primorial_k);
  s += "|n=" + std::to_string(n);
  s += "|Q=" + std::to_string(ramanujan_q);
  s += "|count=" + std::to_string(ca_count);
  s += "|bits=" + std::to_string(precision_bits);
  s += "|seg=" + std::to_string(segment_size);
  s += std::string("|fmt=") + format_name(format);
  return s;
}

RunConfig parse_command_line(const std::vector<std::string>& args) {
  CLI::App app{"finite prime sums/products, exact arithmetic functions, and "
               "extreme-value inequality checks"};
  app.require_subcommand(1);
  RunConfig cfg;

  std::string ineq_name, quant_name, fmt_name = "csv";
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--precision-bits", cfg.precision_bits)->check(CLI::Range(24, 4096));
    sub->add_option("--workers", cfg.workers)->check(CLI::PositiveNumber);
    sub->add_option("--out", cfg.out_path);
    sub->add_option("--format", fmt_name)->check(CLI::IsMember({"csv", "jsonl"}));
    sub->add_option("--segment-size", cfg.segment_size);
    sub->add_option("--checkpoint", cfg.checkpoint_path);
    sub->add_flag("--resume", cfg.resume);
    sub->add_option("--stop-after-units", cfg.stop_after_units)->group("");  // test hook
  };

  auto* c_const = app.add_subcommand("constants", "print the named constants");
  add_common(c_const);

  auto* c_res = app.add_subcommand("residuals", "residual records over a grid");
  c_res->add_option("--quantity", quant_name)->required();
  c_res->add_option("--grid", cfg.grid_spec)->required();
  add_common(c_res);

  auto* c_scan = app.add_subcommand("scan", "exhaustive inequality scan");
  c_scan->add_option("--inequality", ineq_name)->required();
  c_scan->add_option("--pmax", cfg.pmax);
  c_scan->add_option("--nmax", cfg.nmax);
  add_common(c_scan);

  auto* c_check = app.add_subcommand("check", "single-subject inequality report");
  c_check->add_option("--inequality", ineq_name)->required();
  c_check->add_option("--primorial-k", cfg.primorial_k);
  c_check->add_option("--n", cfg.n);
  add_common(c_check);

  auto* c_ram = app.add_subcommand("ramanujan", "partial-sum table of sigma(N)/N");
  c_ram->add_option("--n", cfg.n)->required();
  c_ram->add_option("--Q", cfg.ramanujan_q)->required();
  add_common(c_ram);

  auto* c_ca = app.add_subcommand("ca", "colossally-abundant-style chain");
  c_ca->add_option("--count", cfg.ca_count)->required();
  add_common(c_ca);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    throw ArgumentError(std::string("usage: ") + e.what());
  }

  if (c_const->parsed()) cfg.command = Command::constants;
  if (c_res->parsed()) cfg.command = Command::residuals;
  if (c_scan->parsed()) cfg.command = Command::scan;
  if (c_check->parsed()) cfg.command = Command::check;
  if (c_ram->parsed()) cfg.command = Command::ramanujan;
  if (c_ca->parsed()) cfg.command = Command::ca;
  if (!ineq_name.empty()) cfg.inequality = inequality_from_name(ineq_name);
  if (!quant_name.empty()) cfg.quantity = quantity_from_name(quant_name);
  cfg.format = fmt_name == "jsonl" ? OutFormat::jsonl : OutFormat::csv;
  if (!cfg.grid_spec.empty()) parse_grid(cfg.grid_spec);  // validate early
  return cfg;
}

Cell num_cell(const DD& v) {
  if (std::isinf(v.hi) || std::isnan(v.hi))
    return {std::isnan(v.hi) ? "nan" : (v.hi > 0 ? "inf" : "-inf"), true};
  return {dd_to_string(v), false};
}

Cell num_cell(std::uint64_t v) { return {std::to_string(v), false}; }

Cell str_cell(std::string s) { return {std::move(s), true}; }

RowWriter::RowWriter(const std::string& path, OutFormat format,
                     const std::vector<std::string>& header_comments,
                     const std::vector<std::string>& columns,
                     long long resume_bytes)
    : format_(format), columns_(columns) {
  if (!path.empty()) {
    if (resume_bytes >= 0 && std::filesystem::exists(path)) {
      std::filesystem::resize_file(path, static_cast<std::uintmax_t>(resume_bytes));
      file_ = std::fopen(path.c_str(), "ab");
      if (!file_) throw IoError("cannot open output file for append: " + path);
      bytes_ = static_cast<std::uint64_t>(resume_bytes);
      return;  // header already present in the preserved prefix
    }
    file_ = std::fopen(path.c_str(), "wb");
    if (!file_) throw IoError("cannot open output file: " + path);
  }
  if (format_ == OutFormat::csv) {
    for (const auto& c : header_comments) emit("# " + c + "\n");
    std::string h;
    for (const auto& c : columns_) {
      if (!h.empty()) h += ',';
      h += c;
    }
    emit(h + "\n");
  }
}

RowWriter::~RowWriter() {
  if (file_) std::fclose(static_cast<std::FILE*>(file_));
}

void RowWriter::emit(const std::string& s) {
  std::FILE* f = file_ ? static_cast<std::FILE*>(file_) : stdout;
  if (std::fwrite(s.data(), 1, s.size(), f) != s.size())
    throw IoError("short write to output");
  bytes_ += s.size();
}

void RowWriter::flush() {
  std::fflush(file_ ? static_cast<std::FILE*>(file_) : stdout);
}

void RowWriter::write_row(const std::vector<Cell>& cells) {
  if (cells.size() != columns_.size()) throw IoError("row/column arity mismatch");
  std::string line;
  if (format_ == OutFormat::csv) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) line += ',';
      line += cells[i].text;
    }
  } else {
    line = "{";
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) line += ',';
      line += "\"" + columns_[i] + "\":";
      if (cells[i].quoted)
        line += nlohmann::json(cells[i].text).dump();
      else
        line += cells[i].text;
    }
    line += "}";
  }
  emit(line + "\n");
  ++rows_;
}

std::string Checkpoint::state_at(const std::string& key) const {
  for (const auto& [k, v] : state)
    if (k == key) return v;
  throw CheckpointError("checkpoint missing state key: " + key);
}

std::uint64_t Checkpoint::counter_at(const std::string& key) const {
  for (const auto& [k, v] : counters)
    if (k == key) return v;
  throw CheckpointError("checkpoint missing counter key: " + key);
}

void checkpoint_save(const std::string& path, const Checkpoint& cp) {
  nlohmann::json j;
  j["schema_version"] = cp.schema_version;
  j["fingerprint"] = cp.fingerprint;
  j["unit"] = cp.unit;
  j["rows"] = cp.rows;
  j["out_bytes"] = cp.out_bytes;
  j["state"] = nlohmann::json::object();
  for (const auto& [k, v] : cp.state) j["state"][k] = v;
  j["counters"] = nlohmann::json::object();
  for (const auto& [k, v] : cp.counters) j["counters"][k] = v;
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write checkpoint: " + tmp);
    out << j.dump(2) << "\n";
  }
  std::filesystem::rename(tmp, path);
}

Checkpoint checkpoint_load(const std::string& path,
                           const std::string& expected_fingerprint) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot read checkpoint: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw CheckpointError(std::string("corrupt checkpoint: ") + e.what());
  }
  Checkpoint cp;
  try {
    cp.schema_version = j.at("schema_version").get<int>();
    cp.fingerprint = j.at("fingerprint").get<std::string>();
    cp.unit = j.at("unit").get<std::uint64_t>();
    cp.rows = j.at("rows").get<std::uint64_t>();
    cp.out_bytes = j.at("out_bytes").get<std::uint64_t>();
    for (auto& [k, v] : j.at("state").items())
      cp.state.emplace_back(k, v.get<std::string>());
    for (auto& [k, v] : j.at("counters").items())
      cp.counters.emplace_back(k, v.get<std::uint64_t>());
  } catch (const std::exception& e) {
    throw CheckpointError(std::string("corrupt checkpoint: ") + e.what());
  }
  if (cp.schema_version != 1)
    throw CheckpointError("unsupported checkpoint schema version");
  if (cp.fingerprint != expected_fingerprint)
    throw CheckpointError("checkpoint fingerprint mismatch: run configuration changed");
  return cp;
}

}  // namespace psix
