#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qldpc/alist.hpp"
#include "qldpc/bench.hpp"
#include "qldpc/css_code.hpp"
#include "qldpc/css_json.hpp"
#include "qldpc/decoder.hpp"
#include "qldpc/noise.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace qldpc;

namespace {

std::string builtin_name_list() {
  std::string names;
  for (const BuiltinCode& b : builtin_codes()) {
    if (!names.empty()) names += ", ";
    names += b.name;
  }
  return names;
}

/// --code accepts a CSS JSON file path, a builtin name, or a bare name
/// resolved as <QLDPC_CODE_DIR>/<name>.json.
CssCode resolve_code(const std::string& ref) {
  std::error_code ec;
  if (fs::is_regular_file(ref, ec)) return load_css_json_file(ref);
  for (const BuiltinCode& b : builtin_codes()) {
    if (b.name == ref) return make_builtin_code(ref);
  }
  if (const char* dir = std::getenv("QLDPC_CODE_DIR")) {
    const fs::path candidate = fs::path(dir) / (ref + ".json");
    if (fs::is_regular_file(candidate, ec)) {
      return load_css_json_file(candidate.string());
    }
  }
  throw std::runtime_error("cannot resolve code '" + ref +
                           "': not a file, not a builtin (" +
                           builtin_name_list() +
                           "), and not found under QLDPC_CODE_DIR");
}

/// Parses "x^3+y+y^2" style polynomials: terms joined by '+', each term a
/// '*'-separated product of factors "1", "x", "y", "x^N", or "y^N".
std::vector<BbTerm> parse_bb_poly(const std::string& text) {
  std::string cleaned;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) cleaned += c;
  }
  if (cleaned.empty()) {
    throw std::invalid_argument("polynomial is empty");
  }
  std::vector<BbTerm> terms;
  std::size_t pos = 0;
  while (pos <= cleaned.size()) {
    const std::size_t plus = cleaned.find('+', pos);
    const std::string term =
        cleaned.substr(pos, plus == std::string::npos ? plus : plus - pos);
    if (term.empty()) {
      throw std::invalid_argument("empty term in polynomial '" + text + "'");
    }
    BbTerm parsed;
    std::size_t fpos = 0;
    while (fpos <= term.size()) {
      const std::size_t star = term.find('*', fpos);
      const std::string factor =
          term.substr(fpos, star == std::string::npos ? star : star - fpos);
      if (factor == "1") {
        // multiplicative identity, nothing to add
      } else if (!factor.empty() && (factor[0] == 'x' || factor[0] == 'y')) {
        std::uint32_t exp = 1;
        if (factor.size() > 1) {
          if (factor[1] != '^' || factor.size() == 2) {
            throw std::invalid_argument("bad factor '" + factor +
                                        "' in polynomial '" + text + "'");
          }
          exp = 0;
          for (std::size_t i = 2; i < factor.size(); ++i) {
            if (!std::isdigit(static_cast<unsigned char>(factor[i]))) {
              throw std::invalid_argument("bad exponent in factor '" +
                                          factor + "' of polynomial '" +
                                          text + "'");
            }
            exp = exp * 10 + static_cast<std::uint32_t>(factor[i] - '0');
          }
        }
        if (factor[0] == 'x') {
          parsed.x_exp += exp;
        } else {
          parsed.y_exp += exp;
        }
      } else {
        throw std::invalid_argument("bad factor '" + factor +
                                    "' in polynomial '" + text + "'");
      }
      if (star == std::string::npos) break;
      fpos = star + 1;
    }
    terms.push_back(parsed);
    if (plus == std::string::npos) break;
    pos = plus + 1;
  }
  return terms;
}

struct GenCodeArgs {
  std::string name;
  bool custom = false;
  std::size_t l = 0;
  std::size_t m = 0;
  std::string a_poly;
  std::string b_poly;
  std::string code_name;
  std::size_t distance = 0;
  std::string out_dir;
};

int run_gen_code(const GenCodeArgs& args) {
  if (!args.custom && args.name.empty()) {
    throw std::invalid_argument("gen-code: pass --name <builtin|all> or --bb");
  }

  std::string out = args.out_dir;
  if (out.empty()) {
    const char* env = std::getenv("QLDPC_CODE_DIR");
    out = env != nullptr ? env : ".";
  }
  fs::create_directories(out);

  struct Item {
    std::string name;
    BbCodeSpec spec;
    std::size_t d = 0;
    bool builtin = false;
  };
  std::vector<Item> items;
  if (args.custom) {
    BbCodeSpec spec;
    spec.l = args.l;
    spec.m = args.m;
    spec.a_terms = parse_bb_poly(args.a_poly);
    spec.b_terms = parse_bb_poly(args.b_poly);
    items.push_back({args.code_name, spec, args.distance, false});
  } else if (args.name == "all") {
    for (const BuiltinCode& b : builtin_codes()) {
      items.push_back({b.name, b.spec, b.d, true});
    }
  } else {
    bool found = false;
    for (const BuiltinCode& b : builtin_codes()) {
      if (b.name == args.name) {
        items.push_back({b.name, b.spec, b.d, true});
        found = true;
        break;
      }
    }
    if (!found) {
      throw std::runtime_error("unknown builtin code '" + args.name +
                               "' (available: " + builtin_name_list() + ")");
    }
  }

  for (const Item& item : items) {
    const CssCode code = item.builtin
                             ? make_builtin_code(item.name)
                             : build_bb_code(item.spec, item.name, item.d);
    const fs::path json_path = fs::path(out) / (code.name() + ".json");
    const fs::path hx_path = fs::path(out) / (code.name() + "_hx.alist");
    const fs::path hz_path = fs::path(out) / (code.name() + "_hz.alist");
    {
      std::ofstream os(json_path);
      if (!os) {
        throw std::runtime_error("cannot write " + json_path.string());
      }
      os << save_css_json(code, item.spec);
    }
    save_alist_file(code.hx(), hx_path.string());
    save_alist_file(code.hz(), hz_path.string());

    // Reload everything just written; a code that fails its own
    // round-trip must not be reported as generated.
    const CssCode reloaded = load_css_json_file(json_path.string());
    if (reloaded.params().n != code.params().n ||
        reloaded.params().k != code.params().k ||
        !(load_alist_file(hx_path.string()) == code.hx()) ||
        !(load_alist_file(hz_path.string()) == code.hz())) {
      throw std::runtime_error("round-trip verification failed for " +
                               code.name());
    }
    std::cout << code.name() << ": [[" << code.params().n << ","
              << code.params().k << "," << code.params().d << "]] -> "
              << json_path.string() << " " << hx_path.string() << " "
              << hz_path.string() << "\n";
  }
  return 0;
}

struct DecodeArgs {
  std::string code;
  std::string syndromes;
  double alpha = 0.8;
  std::size_t iters = 10;
  std::string mode = "float";
  bool no_early_term = false;
  bool as_json = false;
  std::string out;
};

int run_decode(const DecodeArgs& args) {
  const CssCode code = resolve_code(args.code);
  DecoderConfig cfg;
  cfg.alpha = args.alpha;
  cfg.max_iterations = args.iters;
  cfg.early_termination = !args.no_early_term;
  cfg.arithmetic = parse_arithmetic(args.mode);

  Decoder combined(code, cfg);
  Decoder x_side(code.graph_x(), cfg);
  Decoder z_side(code.graph_z(), cfg);
  const std::size_t x_checks = code.hz().rows();
  const std::size_t z_checks = code.hx().rows();
  const std::size_t combined_checks = x_checks + z_checks;

  std::ifstream is(args.syndromes);
  if (!is) {
    throw std::runtime_error("cannot open syndrome file: " + args.syndromes);
  }

  std::ofstream file_out;
  std::ostream* os = &std::cout;
  if (!args.out.empty()) {
    file_out.open(args.out);
    if (!file_out) {
      throw std::runtime_error("cannot write output file: " + args.out);
    }
    os = &file_out;
  }

  json rows = json::array();
  if (!args.as_json) *os << "index,converged,iterations,estimate\n";

  std::string line;
  std::size_t line_no = 0;
  std::size_t index = 0;
  DecodeOutcome outcome;
  while (std::getline(is, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const std::size_t last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);
    for (char c : line) {
      if (c != '0' && c != '1') {
        throw std::runtime_error("syndrome file line " +
                                 std::to_string(line_no) +
                                 ": invalid character '" + c + "'");
      }
    }

    Decoder* decoder = nullptr;
    if (line.size() == combined_checks) {
      decoder = &combined;
    } else if (line.size() == x_checks) {
      decoder = &x_side;
    } else if (line.size() == z_checks) {
      decoder = &z_side;
    } else {
      throw std::runtime_error(
          "syndrome file line " + std::to_string(line_no) + ": " +
          std::to_string(line.size()) + " bits does not fit " + code.name() +
          " (expected " + std::to_string(combined_checks) + " combined or " +
          std::to_string(x_checks) + " single-species)");
    }
    decoder->decode_into(Gf2Vector::from_string01(line), outcome);

    if (args.as_json) {
      rows.push_back({{"index", index},
                      {"converged", outcome.converged},
                      {"iterations", outcome.iterations_used},
                      {"estimate", outcome.error_estimate.to_hex()}});
    } else {
      *os << index << ',' << (outcome.converged ? 1 : 0) << ','
          << outcome.iterations_used << ','
          << outcome.error_estimate.to_hex() << "\n";
    }
    ++index;
  }
  if (args.as_json) *os << rows.dump(2) << "\n";
  return 0;
}

struct SimulateArgs {
  std::string code;
  std::string noise = "independent-xz";
  double p = 0.01;
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  double alpha = 0.8;
  std::size_t iters = 10;
  std::string mode = "float";
  bool no_early_term = false;
  std::string log;
  bool as_json = false;
};

int run_simulate(const SimulateArgs& args) {
  const CssCode code = resolve_code(args.code);
  const NoiseModel model{parse_noise_kind(args.noise), args.p, args.seed};
  DecoderConfig cfg;
  cfg.alpha = args.alpha;
  cfg.max_iterations = args.iters;
  cfg.early_termination = !args.no_early_term;
  cfg.arithmetic = parse_arithmetic(args.mode);

  std::ofstream log_os;
  TrialSink sink;
  if (!args.log.empty()) {
    log_os.open(args.log);
    if (!log_os) {
      throw std::runtime_error("cannot write log file: " + args.log);
    }
    log_os << "trial,e_x,e_z,ex_hat,ez_hat,converged_x,converged_z,"
              "iterations_x,iterations_z,classification\n";
    sink = [&log_os](const TrialResult& t) {
      log_os << t.trial << ',' << t.e_x.to_hex() << ',' << t.e_z.to_hex()
             << ',' << t.ex_hat.to_hex() << ',' << t.ez_hat.to_hex() << ','
             << (t.converged_x ? 1 : 0) << ',' << (t.converged_z ? 1 : 0)
             << ',' << t.iterations_x << ',' << t.iterations_z << ','
             << classification_name(t.classification) << "\n";
    };
  }

  const CampaignResult r =
      run_campaign(code, model, args.trials, cfg, args.threads, sink);

  if (args.as_json) {
    const json out = {{"code", code.name()},
                      {"n", code.params().n},
                      {"k", code.params().k},
                      {"d", code.params().d},
                      {"noise", args.noise},
                      {"p", args.p},
                      {"seed", args.seed},
                      {"trials", r.trials},
                      {"exact", r.exact},
                      {"stabilizer", r.stabilizer},
                      {"logical_x", r.logical_x},
                      {"logical_z", r.logical_z},
                      {"logical_both", r.logical_both},
                      {"non_converged", r.non_converged},
                      {"logical_error_rate", r.logical_error_rate},
                      {"baseline_logical_rate", r.baseline_logical_rate},
                      {"convergence_rate", r.convergence_rate},
                      {"mean_iterations", r.mean_iterations}};
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << code.name() << " [[" << code.params().n << ","
              << code.params().k << "," << code.params().d << "]] "
              << args.noise << " p=" << args.p << " seed=" << args.seed
              << " trials=" << r.trials << "\n";
    std::cout << "exact=" << r.exact << " stabilizer=" << r.stabilizer
              << " logical_x=" << r.logical_x << " logical_z=" << r.logical_z
              << " logical_both=" << r.logical_both
              << " non_converged=" << r.non_converged << "\n";
    std::cout << "logical_error_rate=" << r.logical_error_rate
              << " baseline_logical_rate=" << r.baseline_logical_rate
              << " convergence_rate=" << r.convergence_rate
              << " mean_iterations=" << r.mean_iterations << "\n";
  }
  return 0;
}

struct BenchArgs {
  std::string code = "all";
  std::vector<std::size_t> batches{1};
  std::size_t warmup = 100;
  std::size_t measure = 200;
  std::string mode = "float";
  unsigned threads = 1;
  double alpha = 0.8;
  std::size_t iters = 10;
  bool early_term = false;
  double p = 0.01;
  std::uint64_t seed = 1;
  std::string out;
  std::string check;
  bool digest = false;
};

int run_bench_cmd(const BenchArgs& args) {
  if (!args.check.empty()) {
    const std::vector<BenchRecord> rows = read_bench_csv_file(args.check);
    std::cout << "ok: " << rows.size() << " rows\n";
    return 0;
  }

  std::vector<std::string> names;
  if (args.code == "all") {
    for (const BuiltinCode& b : builtin_codes()) names.push_back(b.name);
  } else {
    names.push_back(args.code);
  }

  std::vector<BenchRecord> rows;
  std::vector<std::uint64_t> digests;
  for (const std::string& name : names) {
    const CssCode code = resolve_code(name);
    for (std::size_t batch : args.batches) {
      BenchConfig bc;
      bc.mode = parse_arithmetic(args.mode);
      bc.alpha = args.alpha;
      bc.max_iterations = args.iters;
      bc.early_termination = args.early_term;
      bc.batch = batch;
      bc.threads = args.threads;
      bc.warmup_batches = args.warmup;
      bc.measure_batches = args.measure;
      bc.p = args.p;
      bc.seed = args.seed;
      const BenchResult res = run_bench(code, bc);
      rows.push_back(res.record);
      digests.push_back(res.output_digest);
    }
  }

  std::ofstream file_out;
  std::ostream* os = &std::cout;
  if (!args.out.empty()) {
    file_out.open(args.out);
    if (!file_out) {
      throw std::runtime_error("cannot write output file: " + args.out);
    }
    os = &file_out;
  }
  write_bench_csv(*os, rows);
  if (args.digest) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%016llx",
                    static_cast<unsigned long long>(digests[i]));
      *os << "# digest: " << rows[i].code << " batch=" << rows[i].batch
          << " " << buf << "\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"scaled min-sum decoder toolkit for CSS quantum LDPC codes"};
  app.require_subcommand(1);

  GenCodeArgs gen;
  DecodeArgs dec;
  SimulateArgs sim;
  BenchArgs ben;

  CLI::App* gen_cmd = app.add_subcommand(
      "gen-code", "construct codes, write CSS JSON and alist files");
  CLI::Option* name_opt =
      gen_cmd->add_option("--name", gen.name, "builtin code name, or 'all'");
  CLI::Option* bb_opt = gen_cmd->add_flag(
      "--bb", gen.custom, "build a custom bivariate bicycle code");
  name_opt->excludes(bb_opt);
  gen_cmd->add_option("--l", gen.l, "x shift order")->needs(bb_opt);
  gen_cmd->add_option("--m", gen.m, "y shift order")->needs(bb_opt);
  gen_cmd->add_option("--a", gen.a_poly, "polynomial A, e.g. 'x^3+y+y^2'")
      ->needs(bb_opt);
  gen_cmd->add_option("--b", gen.b_poly, "polynomial B, e.g. 'y^3+x+x^2'")
      ->needs(bb_opt);
  gen_cmd->add_option("--code-name", gen.code_name, "name for a --bb code")
      ->needs(bb_opt);
  gen_cmd
      ->add_option("--distance", gen.distance,
                   "declared distance metadata for a --bb code")
      ->needs(bb_opt);
  gen_cmd->add_option("--out-dir", gen.out_dir,
                      "output directory (default: QLDPC_CODE_DIR or '.')");

  CLI::App* dec_cmd = app.add_subcommand(
      "decode", "decode syndromes from a file, one per line");
  dec_cmd->add_option("--code", dec.code, "code file or builtin name")
      ->required();
  dec_cmd->add_option("--syndromes", dec.syndromes, "syndrome file")
      ->required();
  dec_cmd->add_option("--alpha", dec.alpha, "min-sum scaling factor")
      ->capture_default_str();
  dec_cmd->add_option("--iters", dec.iters, "iteration cap")
      ->capture_default_str();
  dec_cmd->add_option("--mode", dec.mode, "float, int8 or int16")
      ->capture_default_str();
  dec_cmd->add_flag("--no-early-term", dec.no_early_term,
                    "always run the full iteration count");
  dec_cmd->add_flag("--json", dec.as_json, "emit a JSON array");
  dec_cmd->add_option("--out", dec.out, "write results here (default stdout)");

  CLI::App* sim_cmd =
      app.add_subcommand("simulate", "run a Monte-Carlo decoding campaign");
  sim_cmd->add_option("--code", sim.code, "code file or builtin name")
      ->required();
  sim_cmd->add_option("--noise", sim.noise, "independent-xz or depolarizing")
      ->capture_default_str();
  sim_cmd->add_option("--p", sim.p, "physical error rate")
      ->capture_default_str();
  sim_cmd->add_option("--trials", sim.trials, "number of trials")
      ->capture_default_str();
  sim_cmd->add_option("--seed", sim.seed, "random seed")
      ->capture_default_str();
  sim_cmd->add_option("--threads", sim.threads, "workers, 0 = all cores")
      ->capture_default_str();
  sim_cmd->add_option("--alpha", sim.alpha, "min-sum scaling factor")
      ->capture_default_str();
  sim_cmd->add_option("--iters", sim.iters, "iteration cap")
      ->capture_default_str();
  sim_cmd->add_option("--mode", sim.mode, "float, int8 or int16")
      ->capture_default_str();
  sim_cmd->add_flag("--no-early-term", sim.no_early_term,
                    "always run the full iteration count");
  sim_cmd->add_option("--log", sim.log, "write a per-trial CSV log here");
  sim_cmd->add_flag("--json", sim.as_json, "emit aggregates as JSON");

  CLI::App* ben_cmd =
      app.add_subcommand("bench", "measure decode latency, emit CSV");
  ben_cmd->add_option("--code", ben.code, "code file, builtin name, or 'all'")
      ->capture_default_str();
  ben_cmd->add_option("--batch", ben.batches, "batch sizes, comma separated")
      ->delimiter(',')
      ->capture_default_str();
  ben_cmd->add_option("--warmup", ben.warmup, "warmup batches (not measured)")
      ->capture_default_str();
  ben_cmd->add_option("--measure", ben.measure, "measured batches")
      ->capture_default_str();
  ben_cmd->add_option("--mode", ben.mode, "float, int8 or int16")
      ->capture_default_str();
  ben_cmd->add_option("--threads", ben.threads, "workers, 0 = all cores")
      ->capture_default_str();
  ben_cmd->add_option("--alpha", ben.alpha, "min-sum scaling factor")
      ->capture_default_str();
  ben_cmd->add_option("--iters", ben.iters, "iteration cap")
      ->capture_default_str();
  ben_cmd->add_flag("--early-term", ben.early_term,
                    "stop early on converged syndromes");
  ben_cmd->add_option("--p", ben.p, "error rate for the syndrome pool")
      ->capture_default_str();
  ben_cmd->add_option("--seed", ben.seed, "syndrome pool seed")
      ->capture_default_str();
  ben_cmd->add_option("--out", ben.out, "write CSV here (default stdout)");
  ben_cmd->add_option("--check", ben.check,
                      "validate an existing bench CSV and exit");
  ben_cmd->add_flag("--digest", ben.digest,
                    "append output digests as comment lines");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (gen_cmd->parsed()) return run_gen_code(gen);
    if (dec_cmd->parsed()) return run_decode(dec);
    if (sim_cmd->parsed()) return run_simulate(sim);
    if (ben_cmd->parsed()) return run_bench_cmd(ben);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
