#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "mim/detector.hpp"
#include "mim/error.hpp"
#include "mim/experiment.hpp"
#include "mim/fixtures.hpp"
#include "mim/html.hpp"
#include "mim/lexicon.hpp"
#include "mim/markov.hpp"
#include "mim/records.hpp"
#include "mim/rewrite.hpp"
#include "mim/synth.hpp"

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitSuspicious = 3;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    mim::raise(mim::ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Writes through a temp file and renames, so readers never see a partial
// file.
void write_file_atomic(const fs::path& path, std::string_view content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      mim::raise(mim::ErrorCode::IoError, "cannot write " + tmp.string());
    out.write(content.data(),
              static_cast<std::streamsize>(content.size()));
    if (!out)
      mim::raise(mim::ErrorCode::IoError, "short write to " + tmp.string());
  }
  fs::rename(tmp, path);
}

bool looks_like_url(const std::string& input) {
  return input.rfind("http://", 0) == 0 || input.rfind("https://", 0) == 0 ||
         input.rfind("ftp://", 0) == 0;
}

mim::Lexicon load_lexicon_arg(const std::string& arg) {
  if (arg == "study") return mim::study_lexicon();
  if (arg == "pilot") return mim::pilot_lexicon();
  return mim::load_lexicon(read_file(arg), fs::path(arg).stem().string());
}

struct RewriteOptions {
  std::vector<std::string> inputs;
  std::string lexicon;
  std::string policy = "all";
  std::string scope;  // empty: derived from policy
  std::string scope_class = "comment";
  bool no_preserve_case = false;
  std::string markov_model;
  std::string out_dir = ".";
};

int run_rewrite(const RewriteOptions& opt) {
  for (const std::string& input : opt.inputs)
    if (looks_like_url(input))
      mim::raise(mim::ErrorCode::InvalidArgument,
                 "URL inputs are refused; pass local files: " + input);

  const mim::Lexicon lexicon = load_lexicon_arg(opt.lexicon);

  mim::RewritePolicy policy;
  if (opt.policy == "all") policy.occurrence = mim::Occurrence::All;
  else if (opt.policy == "first") policy.occurrence = mim::Occurrence::FirstOnly;
  else if (opt.policy == "comments")
    policy.occurrence = mim::Occurrence::CommentsOnly;
  else
    mim::raise(mim::ErrorCode::InvalidArgument,
               "unknown policy: " + opt.policy);

  std::string scope = opt.scope;
  if (scope.empty())
    scope = (policy.occurrence == mim::Occurrence::CommentsOnly) ? "comments"
                                                                 : "document";
  if (scope == "document")
    policy.scope = mim::html::ScopeSelector::whole_document();
  else if (scope == "comments")
    policy.scope = mim::html::ScopeSelector::comments_only(opt.scope_class);
  else if (scope == "post-body")
    policy.scope = mim::html::ScopeSelector::post_body_only(opt.scope_class);
  else
    mim::raise(mim::ErrorCode::InvalidArgument, "unknown scope: " + scope);
  policy.preserve_case = !opt.no_preserve_case;
  mim::validate_policy(policy);

  std::optional<mim::TokenModel> model;
  if (!opt.markov_model.empty())
    model = mim::TokenModel::parse(read_file(opt.markov_model));

  // Deterministic report order: by input path.
  std::vector<std::string> inputs = opt.inputs;
  std::sort(inputs.begin(), inputs.end());

  for (const std::string& input : inputs) {
    const auto tree = mim::html::parse_html(read_file(input));
    const auto result =
        mim::rewrite(tree, lexicon, policy, model ? &*model : nullptr);
    const std::string stem = fs::path(input).stem().string();
    const fs::path out_dir(opt.out_dir);
    write_file_atomic(out_dir / (stem + ".rewritten.html"),
                      mim::html::serialize(result.tree));
    write_file_atomic(out_dir / (stem + ".rewrite.log"),
                      mim::serialize_log(result.log));
    write_file_atomic(out_dir / (stem + ".rewrite.txt"),
                      mim::format_log_report(result.log));
    std::cout << input << ": " << result.log.swaps.size() << " swaps\n";
  }
  return kExitOk;
}

int run_detect(const std::string& canonical_path,
               const std::string& observed_path,
               const std::vector<std::string>& lexicon_args,
               const std::string& out_dir) {
  const auto canonical = mim::html::parse_html(read_file(canonical_path));
  const auto observed = mim::html::parse_html(read_file(observed_path));
  std::vector<mim::Lexicon> lexicons;
  for (const std::string& arg : lexicon_args)
    lexicons.push_back(load_lexicon_arg(arg));

  const auto report = mim::detect(canonical, observed, lexicons);
  const std::string text = mim::format_report(report);
  std::cout << text;

  if (!out_dir.empty()) {
    nlohmann::json j;
    j["verdict"] =
        report.verdict == mim::Verdict::Clean ? "Clean" : "Suspicious";
    j["digest_match"] = report.digest_match;
    j["canonical_digest"] = report.canonical_digest.hex;
    j["observed_digest"] = report.observed_digest.hex;
    nlohmann::json divergences = nlohmann::json::array();
    for (const auto& d : report.divergences) {
      nlohmann::json entry;
      switch (d.kind) {
        case mim::Divergence::Kind::Substitution:
          entry["kind"] = "substitution";
          entry["before"] = d.before;
          entry["after"] = d.after;
          break;
        case mim::Divergence::Kind::Insertion:
          entry["kind"] = "insertion";
          entry["tokens"] = d.tokens;
          break;
        case mim::Divergence::Kind::Deletion:
          entry["kind"] = "deletion";
          entry["tokens"] = d.tokens;
          break;
      }
      if (d.canonical_span)
        entry["canonical"] = {
            {"path", mim::html::path_to_string(d.canonical_span->path)},
            {"start", d.canonical_span->start},
            {"end", d.canonical_span->end}};
      if (d.observed_span)
        entry["observed"] = {
            {"path", mim::html::path_to_string(d.observed_span->path)},
            {"start", d.observed_span->start},
            {"end", d.observed_span->end}};
      divergences.push_back(std::move(entry));
    }
    j["divergences"] = divergences;
    nlohmann::json inversions = nlohmann::json::array();
    for (const auto& flag : report.valence_inversions)
      inversions.push_back({{"entry", flag.entry_source},
                            {"before", flag.before},
                            {"after", flag.after}});
    j["valence_inversions"] = inversions;
    nlohmann::json swaps = nlohmann::json::array();
    for (const auto& flag : report.bidirectional_swaps)
      swaps.push_back({{"a", flag.a}, {"b", flag.b}});
    j["bidirectional_swaps"] = swaps;

    write_file_atomic(fs::path(out_dir) / "detection.json", j.dump(2) + "\n");
    write_file_atomic(fs::path(out_dir) / "detection.txt", text);
  }
  return report.verdict == mim::Verdict::Clean ? kExitOk : kExitSuspicious;
}

int run_train_markov(const std::string& corpus_dir, std::size_t order,
                     const std::string& out_path) {
  std::vector<fs::path> files;
  if (!fs::is_directory(corpus_dir))
    mim::raise(mim::ErrorCode::IoError,
               "corpus is not a directory: " + corpus_dir);
  for (const auto& entry : fs::directory_iterator(corpus_dir))
    if (entry.is_regular_file()) files.push_back(entry.path());
  std::sort(files.begin(), files.end());

  std::vector<std::vector<std::string>> corpus;
  for (const fs::path& file : files) {
    std::vector<std::string> sequence;
    for (const auto& token : mim::html::tokenize(read_file(file)))
      sequence.push_back(token.text);
    corpus.push_back(std::move(sequence));
  }
  const auto model = mim::TokenModel::train(corpus, order);
  write_file_atomic(out_path, model.serialize());
  std::cout << "trained order-" << order << " model on " << files.size()
            << " files; vocabulary " << model.vocabulary().size() << "\n";
  return kExitOk;
}

int run_generate(std::size_t n, std::uint64_t seed, double mim_fraction,
                 const std::string& params_path, const std::string& out_path) {
  mim::SyntheticParams params = params_path.empty()
                                    ? mim::default_synthetic_params()
                                    : mim::params_from_json(read_file(params_path));
  if (mim_fraction >= 0.0) params.mim_fraction = mim_fraction;
  const auto records = mim::generate_synthetic(params, n, seed);
  write_file_atomic(out_path, mim::serialize_records_csv(records));
  std::cout << "wrote " << records.size() << " records to " << out_path
            << "\n";
  return kExitOk;
}

int run_analyze(const std::string& records_path, const std::string& out_dir) {
  const auto records = mim::parse_records_csv(read_file(records_path));
  const auto report = mim::analyze_experiment(records);
  const std::string text = mim::format_experiment_report(report);
  std::cout << text;
  if (!out_dir.empty()) {
    write_file_atomic(fs::path(out_dir) / "analysis.txt", text);
    write_file_atomic(fs::path(out_dir) / "analysis.json",
                      mim::experiment_report_to_json(report));
  }
  return kExitOk;
}

int run_fixtures(const std::string& out_dir) {
  const fs::path dir(out_dir);
  write_file_atomic(dir / "original_scenario.html",
                    mim::fixtures::original_scenario_html());
  write_file_atomic(dir / "mim_scenario.html",
                    mim::fixtures::mim_scenario_html());
  write_file_atomic(dir / "pilot_scenario.html",
                    mim::fixtures::pilot_scenario_html());
  write_file_atomic(dir / "pilot_swapped.html",
                    mim::fixtures::pilot_swapped_html());
  write_file_atomic(dir / "study.lex", mim::fixtures::study_lexicon_text());
  write_file_atomic(dir / "pilot.lex", mim::fixtures::pilot_lexicon_text());
  std::cout << "wrote fixtures to " << out_dir << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "mimlab: rewrite local HTML corpora with valence lexicons, detect "
      "token-level tampering, and analyze survey-shaped experiments"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Key-value config file; flags override it");

  RewriteOptions rewrite_opt;
  auto* rewrite_cmd = app.add_subcommand(
      "rewrite", "Apply a lexicon to HTML files under an occurrence policy");
  rewrite_cmd->add_option("inputs", rewrite_opt.inputs, "Input HTML files")
      ->required();
  rewrite_cmd
      ->add_option("--lexicon", rewrite_opt.lexicon,
                   "Lexicon file, or builtin name (study, pilot)")
      ->required();
  rewrite_cmd->add_option("--policy", rewrite_opt.policy,
                          "all | first | comments");
  rewrite_cmd->add_option("--scope", rewrite_opt.scope,
                          "document | comments | post-body");
  rewrite_cmd->add_option("--scope-class", rewrite_opt.scope_class,
                          "Class substring marking the scoped region");
  rewrite_cmd->add_flag("--no-preserve-case", rewrite_opt.no_preserve_case,
                        "Use lexicon casing verbatim");
  rewrite_cmd->add_option("--markov-model", rewrite_opt.markov_model,
                          "Trained model file for candidate-set entries");
  rewrite_cmd->add_option("--out", rewrite_opt.out_dir, "Output directory");

  std::string detect_canonical;
  std::string detect_observed;
  std::vector<std::string> detect_lexicons;
  std::string detect_out;
  auto* detect_cmd = app.add_subcommand(
      "detect", "Compare canonical and observed documents (exit 3 when "
                "suspicious)");
  detect_cmd->add_option("--canonical", detect_canonical, "Canonical HTML")
      ->required();
  detect_cmd->add_option("--observed", detect_observed, "Observed HTML")
      ->required();
  detect_cmd->add_option("--lexicon", detect_lexicons,
                         "Reference lexicons (repeatable)");
  detect_cmd->add_option("--out", detect_out, "Report output directory");

  std::string train_corpus;
  std::size_t train_order = 1;
  std::string train_out = "model.mkv";
  auto* train_cmd = app.add_subcommand(
      "train-markov", "Train an order-k token transition model on a corpus "
                      "directory");
  train_cmd->add_option("--corpus", train_corpus, "Directory of text files")
      ->required();
  train_cmd->add_option("--order", train_order, "Context length k (>= 1)");
  train_cmd->add_option("--out", train_out, "Model output file");

  std::size_t generate_n = 0;
  std::uint64_t generate_seed = 0;
  double generate_mim_fraction = -1.0;
  std::string generate_params;
  std::string generate_out = "records.csv";
  auto* generate_cmd = app.add_subcommand(
      "generate", "Generate seeded synthetic respondent records");
  generate_cmd->add_option("--n", generate_n, "Number of records")->required();
  generate_cmd->add_option("--seed", generate_seed, "RNG seed")->required();
  generate_cmd->add_option("--mim-fraction", generate_mim_fraction,
                           "Fraction assigned to the MIM scenario");
  generate_cmd->add_option("--params", generate_params,
                           "Generator parameter JSON file");
  generate_cmd->add_option("--out", generate_out, "Records CSV output");

  std::string analyze_records;
  std::string analyze_out;
  auto* analyze_cmd = app.add_subcommand(
      "analyze", "Rank tests and hierarchical regressions over records");
  analyze_cmd->add_option("--records", analyze_records, "Records CSV")
      ->required();
  analyze_cmd->add_option("--out", analyze_out, "Report output directory");

  std::string fixtures_out = "fixtures";
  auto* fixtures_cmd = app.add_subcommand(
      "fixtures", "Write the built-in scenario documents and lexicons");
  fixtures_cmd->add_option("--out", fixtures_out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (rewrite_cmd->parsed()) return run_rewrite(rewrite_opt);
    if (detect_cmd->parsed())
      return run_detect(detect_canonical, detect_observed, detect_lexicons,
                        detect_out);
    if (train_cmd->parsed())
      return run_train_markov(train_corpus, train_order, train_out);
    if (generate_cmd->parsed())
      return run_generate(generate_n, generate_seed, generate_mim_fraction,
                          generate_params, generate_out);
    if (analyze_cmd->parsed()) return run_analyze(analyze_records, analyze_out);
    if (fixtures_cmd->parsed()) return run_fixtures(fixtures_out);
  } catch (const mim::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitUsage;
}
