#include <charconv>
#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "specfact/model_io.hpp"

namespace {

using namespace specfact;
using nlohmann::json;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::NonFinite:
    case ErrorCode::IoError:
      return 2;
    case ErrorCode::AsymmetricD:
    case ErrorCode::NotPDD:
    case ErrorCode::SingularD:
    case ErrorCode::SingularGamma:
    case ErrorCode::MixedA:
    case ErrorCode::MixedGamma:
    case ErrorCode::NotMinimal:
      return 3;
    case ErrorCode::VerificationFailure:
      return 5;
    default:
      return 4;
  }
}

std::vector<int> parse_block_list(const std::string& text, const char* which) {
  std::vector<int> ids;
  if (text.empty()) return ids;
  std::stringstream stream(text);
  std::string token;
  while (std::getline(stream, token, ',')) {
    const auto begin = token.find_first_not_of(" \t");
    const auto end = token.find_last_not_of(" \t");
    if (begin == std::string::npos) {
      fail(ErrorCode::ParseError,
           std::string("empty entry in ") + which + " block list");
    }
    token = token.substr(begin, end - begin + 1);
    int value = 0;
    const auto [ptr, ec] =
        std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
      fail(ErrorCode::ParseError, std::string("invalid ") + which +
                                      " block index '" + token + "'");
    }
    ids.push_back(value);
  }
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
    fail(ErrorCode::ParseError,
         std::string("duplicate ") + which + " block index");
  }
  return ids;
}

void require_in_range(const std::vector<int>& ids, int count,
                      const char* which) {
  for (int id : ids) {
    if (id < 0 || id >= count) {
      std::ostringstream oss;
      oss << which << " block index " << id << " out of range [0, " << count
          << ")";
      fail(ErrorCode::ParseError, oss.str());
    }
  }
}

std::string format_complex(const Complex& z) {
  std::ostringstream oss;
  oss << z.real();
  if (z.imag() != 0.0) {
    oss << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
  }
  return oss.str();
}

std::string format_complex_list(const std::vector<Complex>& values) {
  std::ostringstream oss;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) oss << ", ";
    oss << format_complex(values[i]);
  }
  return oss.str();
}

json complex_list_json(const std::vector<Complex>& values) {
  json list = json::array();
  for (const auto& v : values) list.push_back(json::array({v.real(), v.imag()}));
  return list;
}

json block_table_json(const SchurStructure& structure) {
  json list = json::array();
  for (std::size_t i = 0; i < structure.blocks().size(); ++i) {
    const auto& block = structure.blocks()[i];
    json entry;
    entry["id"] = i;
    entry["size"] = block.size;
    entry["eigenvalue"] =
        json::array({block.eigenvalue.real(), block.eigenvalue.imag()});
    list.push_back(std::move(entry));
  }
  return list;
}

void print_block_table(const SchurStructure& structure) {
  for (std::size_t i = 0; i < structure.blocks().size(); ++i) {
    const auto& block = structure.blocks()[i];
    std::cout << "  [" << i << "] " << block.size << "x" << block.size
              << " at " << format_complex(block.eigenvalue) << "\n";
  }
}

void print_report_text(const FlipReport& report,
                       std::optional<double> spectral_gate) {
  std::ostringstream oss;
  oss.setf(std::ios::scientific);
  oss.precision(3);
  oss << "spectral error: " << report.spectral_error;
  if (spectral_gate) oss << " (tolerance " << *spectral_gate << ")";
  oss << "\n";
  if (!report.riccati_residuals.empty()) {
    oss << "riccati residuals:";
    for (const auto& [name, value] : report.riccati_residuals) {
      oss << " " << name << "=" << value;
    }
    oss << "\n";
  }
  if (report.diagram_error) {
    oss << "diagram error: " << *report.diagram_error << "\n";
  }
  std::cout << oss.str();
  std::cout << "poles: " << format_complex_list(report.pole_multiset) << "\n";
  std::cout << "zeros: " << format_complex_list(report.zero_multiset) << "\n";
  for (const auto& failure : report.failures) {
    std::cout << "failure: " << failure << "\n";
  }
  std::cout << "verdict: " << (report.pass ? "pass" : "fail") << "\n";
}

void print_report(const FlipReport& report, const std::string& format,
                  std::optional<double> spectral_gate) {
  if (format == "json") {
    std::cout << report_to_json(report);
  } else {
    print_report_text(report, spectral_gate);
  }
}

int cmd_info(const std::string& model_path, const std::string& format) {
  const ReferenceFamily ref = check_admissible(load_model(model_path));
  if (format == "json") {
    json doc;
    doc["admissible"] = true;
    doc["state_dim"] = ref.model().state_dim();
    doc["output_dim"] = ref.model().output_dim();
    doc["poles"] = complex_list_json(poles(ref.model()));
    doc["zeros"] = complex_list_json(zeros(ref.model()));
    doc["zero_blocks"] = block_table_json(ref.zero_structure());
    doc["pole_blocks"] = block_table_json(ref.pole_structure());
    doc["pole_anchor_defined"] = ref.has_q_plus_inverse();
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << "admissible: yes\n";
    std::cout << "state dim: " << ref.model().state_dim() << "\n";
    std::cout << "output dim: " << ref.model().output_dim() << "\n";
    std::cout << "poles: " << format_complex_list(poles(ref.model())) << "\n";
    std::cout << "zeros: " << format_complex_list(zeros(ref.model())) << "\n";
    std::cout << "zero blocks (numerator spectrum):\n";
    print_block_table(ref.zero_structure());
    std::cout << "pole blocks (A spectrum):\n";
    print_block_table(ref.pole_structure());
    std::cout << "pole-side anchor: "
              << (ref.has_q_plus_inverse() ? "defined" : "undefined (A singular)")
              << "\n";
  }
  return 0;
}

int cmd_flip(const std::string& model_path, const std::string& zero_keep,
             const std::string& pole_keep, const std::string& out_path,
             const std::string& report_path, const std::string& format,
             int samples, bool no_diagram) {
  const ReferenceFamily ref = check_admissible(load_model(model_path));
  FlipSpec spec;
  spec.zero_blocks = parse_block_list(zero_keep, "zero");
  spec.pole_blocks = parse_block_list(pole_keep, "pole");
  require_in_range(spec.zero_blocks, ref.zero_structure().block_count(),
                   "zero");
  require_in_range(spec.pole_blocks, ref.pole_structure().block_count(),
                   "pole");

  const FlipReport report = full_report(ref, spec, !no_diagram, samples);
  if (report.factor && !out_path.empty()) {
    save_model_atomic(out_path, *report.factor);
  }
  if (!report_path.empty()) {
    write_text_atomic(report_path, report_to_json(report));
  }
  const double gate =
      tol::kSpectral * (1.0 + spectrum_scale(ref.model(), samples));
  print_report(report, format, gate);
  if (report.computation_error) {
    return exit_code_for(*report.computation_error);
  }
  return report.pass ? 0 : 5;
}

std::string subset_tag(const std::vector<int>& ids) {
  if (ids.empty()) return "none";
  std::ostringstream oss;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i > 0) oss << "-";
    oss << ids[i];
  }
  return oss.str();
}

int cmd_enumerate(const std::string& model_path, const std::string& out_dir,
                  int samples) {
  const ReferenceFamily ref = check_admissible(load_model(model_path));
  const auto factors = enumerate_factors(ref);

  const std::filesystem::path dir(out_dir);
  json summary = json::array();
  for (const auto& [spec, factor] : factors) {
    const std::string name = "factor_z" + subset_tag(spec.zero_blocks) +
                             "_p" + subset_tag(spec.pole_blocks) + ".json";
    save_model_atomic(dir / name, factor);
    json entry;
    entry["file"] = name;
    entry["zero_keep"] = spec.zero_blocks;
    entry["pole_keep"] = spec.pole_blocks;
    entry["poles"] = complex_list_json(poles(factor));
    entry["zeros"] = complex_list_json(zeros(factor));
    entry["spectral_error"] = spectra_match(ref.model(), factor, samples);
    summary.push_back(std::move(entry));
  }
  write_text_atomic(dir / "summary.json", summary.dump(2) + "\n");

  std::cout << "wrote " << factors.size() << " factors to " << out_dir
            << "\n";
  for (const auto& entry : summary) {
    std::cout << "  " << entry["file"].get<std::string>() << "\n";
  }
  return 0;
}

int cmd_gen(int n, int m, std::uint64_t seed, const std::string& out_path) {
  const StateSpaceModel model = random_admissible(n, m, seed);
  save_model_atomic(out_path, model);
  std::cout << "wrote admissible model (n=" << n << ", m=" << m
            << ", seed=" << seed << ") to " << out_path << "\n";
  return 0;
}

int cmd_verify(const std::string& ref_path, const std::string& cand_path,
               int samples, std::optional<double> tol_override,
               const std::string& format) {
  const StateSpaceModel reference = load_model(ref_path);
  const StateSpaceModel candidate = load_model(cand_path);

  FlipReport report;
  report.spectral_error = spectra_match(reference, candidate, samples);
  report.pole_multiset = poles(candidate);
  report.zero_multiset = zeros(candidate);
  const double gate =
      tol_override ? *tol_override
                   : tol::kSpectral *
                         (1.0 + spectrum_scale(reference, samples));
  if (report.spectral_error > gate) {
    report.failures.push_back("spectral_error");
  }
  report.pass = report.failures.empty();
  print_report(report, format, gate);
  return report.pass ? 0 : 5;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Minimal square spectral factors of a rational spectral density, by "
      "flipping zeros and poles of a reference factor"};
  app.require_subcommand(1);

  std::string model_path;
  std::string format = "text";
  std::string zero_keep;
  std::string pole_keep;
  std::string out_path;
  std::string report_path;
  std::string out_dir;
  std::string ref_path;
  std::string cand_path;
  int samples = tol::kSamples;
  bool no_diagram = false;
  int gen_n = 0;
  int gen_m = 1;
  std::uint64_t seed = 0;
  std::optional<double> tol_override;

  auto* info = app.add_subcommand("info", "Validate a model and print its "
                                          "pole/zero block structure");
  info->add_option("model", model_path, "model JSON file")->required();
  info->add_option("--format", format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));

  auto* flip = app.add_subcommand(
      "flip", "Flip the zeros/poles not listed as kept and write the factor");
  flip->add_option("model", model_path, "model JSON file")->required();
  flip->add_option("--zero-keep", zero_keep,
                   "comma-separated zero block ids to keep (default: none)");
  flip->add_option("--pole-keep", pole_keep,
                   "comma-separated pole block ids to keep (default: none)");
  flip->add_option("--out", out_path, "output model JSON file")->required();
  flip->add_option("--report", report_path, "also write the report JSON here");
  flip->add_option("--format", format, "stdout report format: text or json")
      ->check(CLI::IsMember({"text", "json"}));
  flip->add_option("--samples", samples, "unit-circle sample count")
      ->check(CLI::PositiveNumber);
  flip->add_flag("--no-diagram", no_diagram,
                 "skip the dual-composition cross-check");

  auto* enumerate = app.add_subcommand(
      "enumerate", "Write every minimal square factor of the model's "
                   "spectral density");
  enumerate->add_option("model", model_path, "model JSON file")->required();
  enumerate->add_option("--out-dir", out_dir, "output directory")->required();
  enumerate->add_option("--samples", samples, "unit-circle sample count")
      ->check(CLI::PositiveNumber);

  auto* gen = app.add_subcommand("gen", "Generate a random admissible model");
  gen->add_option("-n,--state-dim", gen_n, "state dimension")
      ->required()
      ->check(CLI::PositiveNumber);
  gen->add_option("-m,--output-dim", gen_m, "output dimension (default 1)")
      ->check(CLI::PositiveNumber);
  gen->add_option("--seed", seed, "RNG seed")->required();
  gen->add_option("--out", out_path, "output model JSON file")->required();

  auto* verify = app.add_subcommand(
      "verify", "Check that a candidate factor reproduces the reference "
                "model's spectral density");
  verify->add_option("reference", ref_path, "reference model JSON file")
      ->required();
  verify->add_option("candidate", cand_path, "candidate model JSON file")
      ->required();
  verify->add_option("--samples", samples, "unit-circle sample count")
      ->check(CLI::PositiveNumber);
  verify->add_option("--tol", tol_override,
                     "absolute spectral tolerance (default: scale-relative)");
  verify->add_option("--format", format, "stdout report format: text or json")
      ->check(CLI::IsMember({"text", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*info) return cmd_info(model_path, format);
    if (*flip) {
      return cmd_flip(model_path, zero_keep, pole_keep, out_path, report_path,
                      format, samples, no_diagram);
    }
    if (*enumerate) return cmd_enumerate(model_path, out_dir, samples);
    if (*gen) return cmd_gen(gen_n, gen_m, seed, out_path);
    if (*verify) {
      return cmd_verify(ref_path, cand_path, samples, tol_override, format);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
