// readrank: sentence readability ranking toolkit CLI.
//
// Subcommands cover the full pipeline: align parallel articles, extract
// features, train pairwise rankers, and run the evaluation harnesses.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "readrank/corpus.hpp"
#include "readrank/errors.hpp"
#include "readrank/eval.hpp"
#include "readrank/features.hpp"
#include "readrank/lexicon.hpp"
#include "readrank/ranker.hpp"
#include "readrank/util.hpp"

namespace rr = readrank;

namespace {

constexpr const char* kVersion =
    "readrank 1.0.0 (corpus format v1, feature matrix v1, model format v1)";

std::string stem_of(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

void print_accuracy(const rr::EvalReport& report) {
  std::printf("accuracy %.4f (correct %ld, wrong %ld, tied %ld)\n", report.accuracy,
              report.correct, report.wrong, report.tied);
}

struct LexiconOptions {
  std::string aoa, imagery, familiarity, meaningfulness, concreteness, senses, celex;
  std::string features;  // comma-separated restriction
  bool include_coverage = false;

  void attach(CLI::App* cmd, bool with_selection) {
    cmd->add_option("--aoa", aoa, "Age-of-acquisition norms TSV");
    cmd->add_option("--imagery", imagery, "Imagery norms TSV");
    cmd->add_option("--familiarity", familiarity, "Familiarity norms TSV");
    cmd->add_option("--meaningfulness", meaningfulness, "Meaningfulness norms TSV");
    cmd->add_option("--concreteness", concreteness, "Concreteness norms TSV");
    cmd->add_option("--senses", senses, "Word sense count TSV");
    cmd->add_option("--celex", celex, "Lemma attribute table TSV");
    if (with_selection) {
      cmd->add_option("--features", features,
                      "Comma-separated feature names to keep (default: all available)");
      cmd->add_flag("--include-coverage", include_coverage,
                    "Add lexicon coverage companion features");
    }
  }

  rr::FeatureRegistry registry() const {
    std::map<std::string, rr::NormLexicon> norms;
    auto bind = [&](const std::string& path, const std::string& name) {
      if (!path.empty()) norms[name] = rr::load_norms(path, name);
    };
    bind(aoa, "aoa");
    bind(imagery, "imagery");
    bind(familiarity, "familiarity");
    bind(meaningfulness, "meaningfulness");
    bind(concreteness, "concreteness");
    bind(senses, "senses");
    std::optional<rr::AttributeTable> table;
    if (!celex.empty()) table = rr::load_attributes(celex, "celex");
    rr::FeatureRegistry reg =
        rr::FeatureRegistry::standard(std::move(norms), std::move(table), include_coverage);
    if (!features.empty()) reg = reg.restricted_to(rr::split(features, ','));
    return reg;
  }

  // Registry that reproduces exactly the schema of a trained model.
  rr::FeatureRegistry registry_for_schema(const std::vector<std::string>& schema) const {
    rr::FeatureRegistry reg = registry();
    reg.enabled = schema;
    reg.validate();
    return reg;
  }
};

struct TrainOptions {
  std::string algo = "ranksvm";
  rr::TrainConfig cfg;

  void attach(CLI::App* cmd) {
    cmd->add_option("--algo", algo, "Ranking algorithm: ranksvm, ranknet, rankboost")
        ->check(CLI::IsMember({"ranksvm", "ranknet", "rankboost"}));
    cmd->add_option("--lambda", cfg.lambda, "RankSVM regularization");
    cmd->add_option("--learning-rate", cfg.learning_rate, "SGD learning rate");
    cmd->add_option("--epochs", cfg.epochs, "Training epochs");
    cmd->add_option("--hidden", cfg.hidden_size, "RankNet hidden units");
    cmd->add_option("--rounds", cfg.rounds, "RankBoost rounds");
    cmd->add_option("--seed", cfg.seed, "Random seed");
  }

  rr::TrainConfig config() const {
    rr::TrainConfig out = cfg;
    out.algorithm = rr::algorithm_from_name(algo);
    if (out.lambda <= 0 || out.learning_rate <= 0 || out.epochs < 1 ||
        out.hidden_size < 1 || out.rounds < 1)
      throw rr::Error("training hyperparameters must be positive");
    return out;
  }
};

void setup_subcommand(CLI::App* cmd) {
  // Placeholder so --config shows in help; the file itself is expanded into
  // argv before parsing (see expand_config_args).
  static std::string sink;
  cmd->add_option("--config", sink, "Flat key=value config file; flags override");
}

// Splices `key=value` lines from a --config file into the argument list,
// right after the subcommand so explicit flags win. Unknown keys are
// rejected. CLI11's own config reader is bypassed: it does not process
// files attached to subcommands, and a flat format is all we want.
std::vector<std::string> expand_config_args(CLI::App& app, int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  if (args.empty() || args[0].empty() || args[0][0] == '-') return args;
  CLI::App* sub = app.get_subcommand_no_throw(args[0]);
  if (sub == nullptr) return args;

  std::string config_path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size())
      config_path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0)
      config_path = args[i].substr(9);
  }
  if (config_path.empty()) return args;

  std::ifstream in(config_path);
  if (!in) throw rr::Error("cannot open config file: " + config_path);
  std::vector<std::string> injected;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string entry = rr::trim(line);
    if (entry.empty() || entry[0] == '#') continue;
    std::size_t eq = entry.find('=');
    if (eq == std::string::npos)
      throw CLI::ConfigError("config line " + std::to_string(line_no) +
                             " is not key=value: " + entry);
    std::string key = rr::trim(entry.substr(0, eq));
    std::string value = rr::trim(entry.substr(eq + 1));
    if (key.empty() || key == "config" ||
        sub->get_option_no_throw("--" + key) == nullptr)
      throw CLI::ConfigError("unknown config key '" + key + "' for subcommand '" +
                             sub->get_name() + "'");
    CLI::Option* opt = sub->get_option_no_throw("--" + key);
    if (opt->get_expected_max() == 0)
      injected.push_back("--" + key + "=" + value);  // flag
    else {
      injected.push_back("--" + key);
      injected.push_back(value);
    }
  }

  std::vector<std::string> out;
  out.push_back(args[0]);
  out.insert(out.end(), injected.begin(), injected.end());
  out.insert(out.end(), args.begin() + 1, args.end());
  return out;
}

// Later occurrences override earlier ones, so command-line flags beat
// config-file values.
void allow_overrides(CLI::App& app) {
  for (CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; }))
    for (CLI::Option* opt : sub->get_options())
      if (opt->get_expected_max() <= 1 && opt->get_name() != "--help")
        opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
}

int run(int argc, char** argv) {
  CLI::App app{"Sentence readability ranking toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  // --- align ---------------------------------------------------------
  auto* align = app.add_subcommand(
      "align", "Align parallel articles into a sentence pair/triple corpus");
  setup_subcommand(align);
  std::string al_harder, al_simpler, al_adv, al_int, al_ele, al_out, al_article;
  int al_harder_level = 2, al_simpler_level = 1;
  rr::AlignmentConfig al_cfg;
  bool al_allow_identical = false;
  align->add_option("--harder", al_harder, "Harder article (one sentence per line)");
  align->add_option("--simpler", al_simpler, "Simpler article");
  align->add_option("--harder-level", al_harder_level, "Reading level of --harder");
  align->add_option("--simpler-level", al_simpler_level, "Reading level of --simpler");
  align->add_option("--adv", al_adv, "Advanced article (triple mode)");
  align->add_option("--int", al_int, "Intermediate article (triple mode)");
  align->add_option("--ele", al_ele, "Elementary article (triple mode)");
  align->add_option("--threshold", al_cfg.threshold, "Minimum cosine similarity")
      ->check(CLI::Range(0.0, 1.0));
  align->add_option("--max-splits", al_cfg.max_splits,
                    "Max simpler sentences one harder sentence may map to")
      ->check(CLI::PositiveNumber);
  align->add_flag("--allow-identical", al_allow_identical,
                  "Keep pairs whose texts are identical");
  align->add_option("--article-id", al_article, "Group id prefix (default from filenames)");
  align->add_option("--out", al_out, "Output corpus TSV")->required();

  // --- split ---------------------------------------------------------
  auto* split_cmd = app.add_subcommand(
      "split", "Split a triple corpus into Adv-Int and Int-Ele pair corpora");
  setup_subcommand(split_cmd);
  std::string sp_in, sp_out_ai, sp_out_ie;
  split_cmd->add_option("--triples", sp_in, "Triple corpus TSV")->required();
  split_cmd->add_option("--out-adv-int", sp_out_ai, "Adv-Int output TSV")->required();
  split_cmd->add_option("--out-int-ele", sp_out_ie, "Int-Ele output TSV")->required();

  // --- extract -------------------------------------------------------
  auto* extract = app.add_subcommand("extract", "Extract features from an aligned corpus");
  setup_subcommand(extract);
  std::string ex_corpus, ex_out, ex_format = "tsv";
  int ex_jobs = 1;
  LexiconOptions ex_lex;
  extract->add_option("--corpus", ex_corpus, "Aligned corpus TSV")->required();
  extract->add_option("--out", ex_out, "Output feature matrix")->required();
  extract->add_option("--format", ex_format, "Output format: tsv or letor")
      ->check(CLI::IsMember({"tsv", "letor"}));
  extract->add_option("--jobs", ex_jobs, "Worker threads")->check(CLI::PositiveNumber);
  ex_lex.attach(extract, true);

  // --- train ---------------------------------------------------------
  auto* train_cmd = app.add_subcommand("train", "Train a pairwise ranking model");
  setup_subcommand(train_cmd);
  std::string tr_in, tr_out;
  TrainOptions tr_opts;
  train_cmd->add_option("--in", tr_in, "Training feature matrix TSV")->required();
  train_cmd->add_option("--out", tr_out, "Output model JSON")->required();
  tr_opts.attach(train_cmd);

  // --- eval ----------------------------------------------------------
  auto* eval_cmd = app.add_subcommand(
      "eval", "Pairwise accuracy: holdout, cross-corpus, or k-fold CV");
  setup_subcommand(eval_cmd);
  std::string ev_model, ev_train, ev_test, ev_out;
  int ev_cv = 0, ev_jobs = 1;
  TrainOptions ev_opts;
  eval_cmd->add_option("--model", ev_model, "Trained model JSON (holdout mode)");
  eval_cmd->add_option("--train", ev_train, "Training feature matrix (cross/CV mode)");
  eval_cmd->add_option("--test", ev_test, "Test feature matrix");
  eval_cmd->add_option("--cv", ev_cv, "Number of CV folds over --train");
  eval_cmd->add_option("--jobs", ev_jobs, "Worker threads")->check(CLI::PositiveNumber);
  eval_cmd->add_option("--out", ev_out, "Report CSV path");
  ev_opts.attach(eval_cmd);

  // --- baseline ------------------------------------------------------
  auto* baseline = app.add_subcommand("baseline",
                                      "Flesch-Kincaid ranking baseline on a corpus");
  setup_subcommand(baseline);
  std::string bl_corpus, bl_out;
  baseline->add_option("--corpus", bl_corpus, "Aligned corpus TSV")->required();
  baseline->add_option("--out", bl_out, "Report CSV path");

  // --- ablate --------------------------------------------------------
  auto* ablate = app.add_subcommand("ablate", "Feature-group or single-feature ablation");
  setup_subcommand(ablate);
  std::string ab_mode = "single", ab_train, ab_test, ab_out;
  double ab_min_report = 0.6;
  int ab_jobs = 1;
  TrainOptions ab_opts;
  ablate->add_option("--mode", ab_mode, "groups or single")
      ->check(CLI::IsMember({"groups", "single"}));
  ablate->add_option("--train", ab_train, "Training feature matrix")->required();
  ablate->add_option("--test", ab_test, "Test feature matrix")->required();
  ablate->add_option("--min-report", ab_min_report,
                     "Accuracy threshold marked in the single-feature report");
  ablate->add_option("--jobs", ab_jobs, "Worker threads")->check(CLI::PositiveNumber);
  ablate->add_option("--out", ab_out, "Ablation CSV path")->required();
  ab_opts.attach(ablate);

  // --- curve ---------------------------------------------------------
  auto* curve = app.add_subcommand("curve", "Learning curve over training sizes");
  setup_subcommand(curve);
  std::string cu_train, cu_sizes, cu_out;
  std::vector<std::string> cu_tests;
  int cu_jobs = 1;
  TrainOptions cu_opts;
  curve->add_option("--train", cu_train, "Training feature matrix")->required();
  curve->add_option("--test", cu_tests, "Test feature matrix (repeatable)")->required();
  curve->add_option("--sizes", cu_sizes, "Comma-separated training sizes in groups")
      ->required();
  curve->add_option("--jobs", cu_jobs, "Worker threads")->check(CLI::PositiveNumber);
  curve->add_option("--out", cu_out, "Curve CSV path")->required();
  cu_opts.attach(curve);

  // --- errors --------------------------------------------------------
  auto* errors = app.add_subcommand("errors",
                                    "Dump misranked/tied pairs with feature detail");
  setup_subcommand(errors);
  std::string er_model, er_corpus, er_out;
  LexiconOptions er_lex;
  errors->add_option("--model", er_model, "Trained model JSON")->required();
  errors->add_option("--corpus", er_corpus, "Aligned corpus TSV with texts")->required();
  errors->add_option("--out", er_out, "Error report TSV")->required();
  er_lex.attach(errors, false);

  try {
    allow_overrides(app);
    std::vector<std::string> args = expand_config_args(app, argc, argv);
    std::reverse(args.begin(), args.end());  // CLI11's vector parse wants this
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    std::cerr << "error: " << e.what() << '\n';
    std::cerr << app.help();
    return 1;  // usage error
  }

  if (align->parsed()) {
    bool triple_mode = !al_adv.empty() || !al_int.empty() || !al_ele.empty();
    al_cfg.require_distinct_text = !al_allow_identical;
    if (triple_mode) {
      if (al_adv.empty() || al_int.empty() || al_ele.empty())
        throw rr::Error("triple mode needs --adv, --int and --ele");
      rr::RawArticle adv = rr::load_article(al_adv, 3);
      rr::RawArticle mid = rr::load_article(al_int, 2);
      rr::RawArticle ele = rr::load_article(al_ele, 1);
      if (!al_article.empty()) adv.article_id = al_article;
      auto triples = rr::align_triples(adv, mid, ele, al_cfg);
      rr::write_corpus(triples, al_out);
      std::printf("aligned %zu triples -> %s\n", triples.size(), al_out.c_str());
    } else {
      if (al_harder.empty() || al_simpler.empty())
        throw rr::Error("pair mode needs --harder and --simpler");
      rr::RawArticle harder = rr::load_article(al_harder, al_harder_level);
      rr::RawArticle simpler = rr::load_article(al_simpler, al_simpler_level);
      harder.article_id = al_article.empty()
                              ? stem_of(al_harder) + "-" + stem_of(al_simpler)
                              : al_article;
      auto pairs = rr::align_pair(harder, simpler, al_cfg);
      rr::write_corpus(pairs, al_out);
      std::printf("aligned %zu pairs -> %s\n", pairs.size(), al_out.c_str());
    }
    return 0;
  }

  if (split_cmd->parsed()) {
    rr::Corpus corpus = rr::read_corpus(sp_in);
    if (!corpus.is_triples()) throw rr::Error("--triples file does not contain triples");
    rr::LevelSplit parts = rr::level_split(corpus.triples);
    rr::write_corpus(parts.adv_int, sp_out_ai);
    rr::write_corpus(parts.int_ele, sp_out_ie);
    std::printf("split %zu triples -> %s, %s\n", corpus.triples.size(), sp_out_ai.c_str(),
                sp_out_ie.c_str());
    return 0;
  }

  if (extract->parsed()) {
    rr::Corpus corpus = rr::read_corpus(ex_corpus);
    rr::FeatureRegistry reg = ex_lex.registry();
    rr::FeatureMatrix matrix = rr::extract_corpus(corpus, reg, ex_jobs);
    if (ex_format == "letor")
      rr::write_matrix_letor(matrix, ex_out);
    else
      rr::write_matrix_tsv(matrix, ex_out);
    std::printf("extracted %zu rows x %zu features -> %s\n", matrix.rows.size(),
                matrix.feature_names.size(), ex_out.c_str());
    return 0;
  }

  if (train_cmd->parsed()) {
    rr::RankData data = rr::RankData::from_matrix(rr::read_matrix_tsv(tr_in));
    rr::TrainResult result = rr::train(data, tr_opts.config());
    rr::save_model(result.model, tr_out);
    std::printf("trained %s model on %zu instances -> %s\n",
                result.model.algorithm.c_str(), data.items.size(), tr_out.c_str());
    return 0;
  }

  if (eval_cmd->parsed()) {
    rr::EvalReport report;
    if (ev_cv > 0) {
      if (ev_train.empty()) throw rr::Error("--cv needs --train");
      rr::RankData data = rr::RankData::from_matrix(rr::read_matrix_tsv(ev_train));
      report = rr::kfold_cv(data, ev_cv, ev_opts.config(), ev_jobs);
      report.train_name = ev_train;
      report.test_name = ev_train;
    } else if (!ev_model.empty()) {
      if (ev_test.empty()) throw rr::Error("--model needs --test");
      rr::RankModel model = rr::load_model(ev_model);
      rr::RankData test = rr::RankData::from_matrix(rr::read_matrix_tsv(ev_test));
      report = rr::pairwise_accuracy(model, test);
      report.algorithm = model.algorithm;
      report.config_hash = rr::hex64(rr::fnv1a64(model.algorithm));
      report.train_name = ev_model;
      report.test_name = ev_test;
    } else if (!ev_train.empty() && !ev_test.empty()) {
      rr::RankData train_data = rr::RankData::from_matrix(rr::read_matrix_tsv(ev_train));
      rr::RankData test_data = rr::RankData::from_matrix(rr::read_matrix_tsv(ev_test));
      report = rr::cross_corpus(train_data, test_data, ev_opts.config());
      report.train_name = ev_train;
      report.test_name = ev_test;
    } else {
      throw rr::Error("eval needs --model + --test, --train + --test, or --cv + --train");
    }
    print_accuracy(report);
    if (!report.fold_accuracies.empty())
      std::printf("fold mean %.4f, fold std %.4f\n", report.fold_mean, report.fold_std);
    if (!ev_out.empty()) rr::write_report_csv(report, ev_out);
    return 0;
  }

  if (baseline->parsed()) {
    rr::Corpus corpus = rr::read_corpus(bl_corpus);
    rr::EvalReport report = rr::fk_baseline(rr::corpus_pairs(corpus));
    report.test_name = bl_corpus;
    print_accuracy(report);
    if (!bl_out.empty()) rr::write_report_csv(report, bl_out);
    return 0;
  }

  if (ablate->parsed()) {
    rr::RankData train_data = rr::RankData::from_matrix(rr::read_matrix_tsv(ab_train));
    rr::RankData test_data = rr::RankData::from_matrix(rr::read_matrix_tsv(ab_test));
    rr::TrainConfig cfg = ab_opts.config();
    std::vector<rr::AblationRow> rows;
    if (ab_mode == "groups") {
      rows = rr::ablate_groups(train_data, test_data, cfg, ab_jobs);
      rr::write_ablation_csv(rows, ab_out, cfg.config_hash());
    } else {
      rows = rr::ablate_single(train_data, test_data, cfg, ab_jobs);
      rr::write_ablation_csv(rows, ab_out, cfg.config_hash(), ab_min_report);
    }
    std::printf("ablated %zu cells -> %s\n", rows.size(), ab_out.c_str());
    return 0;
  }

  if (curve->parsed()) {
    rr::RankData train_data = rr::RankData::from_matrix(rr::read_matrix_tsv(cu_train));
    std::vector<rr::RankData> tests;
    for (const auto& path : cu_tests)
      tests.push_back(rr::RankData::from_matrix(rr::read_matrix_tsv(path)));
    std::vector<std::size_t> sizes;
    for (const auto& tok : rr::split(cu_sizes, ',')) {
      int v;
      if (!rr::parse_int(rr::trim(tok), v) || v < 1)
        throw rr::Error("bad --sizes entry '" + tok + "'");
      sizes.push_back(static_cast<std::size_t>(v));
    }
    rr::CurveTable table =
        rr::learning_curve(train_data, sizes, tests, cu_tests, cu_opts.config(), cu_jobs);
    rr::write_curve_csv(table, cu_out);
    std::printf("learning curve over %zu sizes -> %s\n", table.sizes.size(),
                cu_out.c_str());
    return 0;
  }

  if (errors->parsed()) {
    rr::RankModel model = rr::load_model(er_model);
    rr::Corpus corpus = rr::read_corpus(er_corpus);
    rr::FeatureRegistry reg = er_lex.registry_for_schema(model.schema);
    rr::FeatureMatrix matrix = rr::extract_corpus(corpus, reg, 1);
    rr::RankData test = rr::RankData::from_matrix(matrix);
    rr::error_report(model, test, er_out);
    std::printf("error report -> %s\n", er_out.c_str());
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const rr::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
