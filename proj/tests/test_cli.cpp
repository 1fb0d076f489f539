#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <string>
#include <vector>

#include "testutil.hpp"

using rrtest::TempDir;

namespace {

const std::string kCli = READRANK_CLI_PATH;
const std::string kResources = READRANK_RESOURCES_DIR;
const std::string kGolden = READRANK_GOLDEN_DIR;

struct CliResult {
  int exit_code;
  std::string out;
  std::string err;
};

CliResult run_cli(const std::string& args, const std::string& workdir) {
  std::string out_file = workdir + "/cli_stdout.txt";
  std::string err_file = workdir + "/cli_stderr.txt";
  std::string cmd = "cd " + workdir + " && " + kCli + " " + args + " > " + out_file +
                    " 2> " + err_file;
  int status = std::system(cmd.c_str());
  CliResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  result.out = rrtest::read_file(out_file);
  result.err = rrtest::read_file(err_file);
  return result;
}

std::string lexicon_flags() {
  std::string lex = kResources + "/lexicons";
  return "--aoa " + lex + "/aoa.tsv --imagery " + lex + "/imagery.tsv --familiarity " +
         lex + "/familiarity.tsv --meaningfulness " + lex +
         "/meaningfulness.tsv --concreteness " + lex + "/concreteness.tsv --senses " +
         lex + "/senses.tsv --celex " + lex + "/celex.tsv";
}

// Canonical toy pipeline: OSE2 pair corpus (both articles, all three level
// pairings, in a fixed order), the wiki pair corpus, features for both,
// and a RankSVM model trained on OSE2. Everything lands in `dir`.
void build_toy_pipeline(const std::string& dir) {
  std::string ose = kResources + "/toy/ose";
  std::string wiki = kResources + "/toy/wiki";
  struct Leg {
    const char* art;
    const char* hard;
    const char* simple;
    int hl, sl;
  };
  std::vector<Leg> legs = {{"art1", "adv", "int", 3, 2}, {"art1", "int", "ele", 2, 1},
                           {"art1", "adv", "ele", 3, 1}, {"art2", "adv", "int", 3, 2},
                           {"art2", "int", "ele", 2, 1}, {"art2", "adv", "ele", 3, 1}};
  for (std::size_t i = 0; i < legs.size(); ++i) {
    const Leg& leg = legs[i];
    std::string out = "p" + std::to_string(i) + ".tsv";
    CliResult r = run_cli("align --harder " + ose + "/" + leg.art + "_" + leg.hard +
                              ".txt --harder-level " + std::to_string(leg.hl) +
                              " --simpler " + ose + "/" + leg.art + "_" + leg.simple +
                              ".txt --simpler-level " + std::to_string(leg.sl) +
                              " --out " + out,
                          dir);
    REQUIRE(r.exit_code == 0);
  }
  REQUIRE(std::system(("cd " + dir +
                       " && head -1 p0.tsv > ose2.tsv && for i in 0 1 2 3 4 5; do "
                       "tail -n +2 p$i.tsv >> ose2.tsv; done")
                          .c_str()) == 0);

  REQUIRE(run_cli("align --harder " + wiki + "/wiki_normal.txt --simpler " + wiki +
                      "/wiki_simple.txt --out wiki.tsv",
                  dir)
              .exit_code == 0);
  REQUIRE(run_cli("extract --corpus ose2.tsv --out ose2_feats.tsv " + lexicon_flags(),
                  dir)
              .exit_code == 0);
  REQUIRE(run_cli("extract --corpus wiki.tsv --out wiki_feats.tsv " + lexicon_flags(),
                  dir)
              .exit_code == 0);
  REQUIRE(run_cli("train --algo ranksvm --in ose2_feats.tsv --out m.json --seed 42",
                  dir)
              .exit_code == 0);
}

}  // namespace

TEST_CASE("version and usage errors") {
  TempDir tmp("cliver");
  CliResult version = run_cli("--version", tmp.path(""));
  CHECK(version.exit_code == 0);
  CHECK(version.out.find("readrank 1.0.0") != std::string::npos);
  CHECK(version.out.find("model format v1") != std::string::npos);

  CliResult bogus = run_cli("frobnicate", tmp.path(""));
  CHECK(bogus.exit_code == 1);
  CHECK(bogus.err.find("Subcommands:") != std::string::npos);  // usage text

  CliResult bad_flag = run_cli("train --no-such-flag", tmp.path(""));
  CHECK(bad_flag.exit_code == 1);
}

TEST_CASE("every subcommand has --help listing its flags") {
  TempDir tmp("clihelp");
  struct Probe {
    const char* cmd;
    const char* flag;
  };
  for (const Probe& probe : std::vector<Probe>{{"align", "--threshold"},
                                               {"split", "--out-adv-int"},
                                               {"extract", "--corpus"},
                                               {"train", "--algo"},
                                               {"eval", "--cv"},
                                               {"baseline", "--corpus"},
                                               {"ablate", "--min-report"},
                                               {"curve", "--sizes"},
                                               {"errors", "--model"}}) {
    CliResult r = run_cli(std::string(probe.cmd) + " --help", tmp.path(""));
    CHECK(r.exit_code == 0);
    CHECK(r.out.find(probe.flag) != std::string::npos);
  }
}

TEST_CASE("data errors exit with code 2 and one-line messages") {
  TempDir tmp("clidata");
  CliResult missing = run_cli("extract --corpus nope.tsv --out x.tsv", tmp.path(""));
  CHECK(missing.exit_code == 2);
  CHECK(missing.err.find("error:") == 0);

  CliResult bad_model = run_cli("eval --model nope.json --test nope.tsv", tmp.path(""));
  CHECK(bad_model.exit_code == 2);

  rrtest::write_file(tmp.path("empty.txt"), "\n");
  CliResult empty = run_cli(
      "align --harder empty.txt --simpler empty.txt --out x.tsv", tmp.path(""));
  CHECK(empty.exit_code == 2);
}

TEST_CASE("toy pipeline matches the frozen golden outputs") {
  TempDir tmp("cligold");
  build_toy_pipeline(tmp.path(""));

  CliResult eval = run_cli("eval --model m.json --test wiki_feats.tsv --out report.csv",
                           tmp.path(""));
  REQUIRE(eval.exit_code == 0);
  CHECK(eval.out == rrtest::read_file(kGolden + "/eval_toy_stdout.txt"));
  CHECK(rrtest::read_file(tmp.path("report.csv")) ==
        rrtest::read_file(kGolden + "/eval_toy_report.csv"));

  CliResult fk = run_cli("baseline --corpus wiki.tsv", tmp.path(""));
  REQUIRE(fk.exit_code == 0);
  CHECK(fk.out == rrtest::read_file(kGolden + "/baseline_toy_stdout.txt"));
}

TEST_CASE("commands are deterministic and jobs-invariant") {
  TempDir a_dir("clidet_a");
  TempDir b_dir("clidet_b");
  build_toy_pipeline(a_dir.path(""));
  build_toy_pipeline(b_dir.path(""));

  // Byte-identical artifacts across two separate runs.
  for (const char* f : {"ose2.tsv", "wiki.tsv", "ose2_feats.tsv", "m.json"})
    CHECK(rrtest::read_file(a_dir.path(f)) == rrtest::read_file(b_dir.path(f)));

  // jobs=1 vs jobs=4 parity for the parallel commands.
  REQUIRE(run_cli("extract --corpus ose2.tsv --out par.tsv --jobs 4 " + lexicon_flags(),
                  a_dir.path(""))
              .exit_code == 0);
  CHECK(rrtest::read_file(a_dir.path("par.tsv")) ==
        rrtest::read_file(a_dir.path("ose2_feats.tsv")));

  for (const char* jobs : {"1", "4"}) {
    REQUIRE(run_cli(std::string("eval --cv 5 --train ose2_feats.tsv --algo rankboost "
                                "--seed 9 --jobs ") +
                        jobs + " --out cv" + jobs + ".csv",
                    a_dir.path(""))
                .exit_code == 0);
    REQUIRE(run_cli(std::string("ablate --mode single --train ose2_feats.tsv --test "
                                "wiki_feats.tsv --algo ranksvm --seed 9 --jobs ") +
                        jobs + " --out ab" + jobs + ".csv",
                    a_dir.path(""))
                .exit_code == 0);
    REQUIRE(run_cli(std::string("curve --train ose2_feats.tsv --test wiki_feats.tsv "
                                "--sizes 10,30 --algo ranksvm --seed 9 --jobs ") +
                        jobs + " --out cu" + jobs + ".csv",
                    a_dir.path(""))
                .exit_code == 0);
  }
  CHECK(rrtest::read_file(a_dir.path("cv1.csv")) == rrtest::read_file(a_dir.path("cv4.csv")));
  CHECK(rrtest::read_file(a_dir.path("ab1.csv")) == rrtest::read_file(a_dir.path("ab4.csv")));
  CHECK(rrtest::read_file(a_dir.path("cu1.csv")) == rrtest::read_file(a_dir.path("cu4.csv")));
}

TEST_CASE("split, errors and letor output") {
  TempDir tmp("clisplit");
  std::string ose = kResources + "/toy/ose";
  REQUIRE(run_cli("align --adv " + ose + "/art1_adv.txt --int " + ose +
                      "/art1_int.txt --ele " + ose + "/art1_ele.txt --out ose3.tsv",
                  tmp.path(""))
              .exit_code == 0);
  CliResult split = run_cli(
      "split --triples ose3.tsv --out-adv-int ai.tsv --out-int-ele ie.tsv", tmp.path(""));
  REQUIRE(split.exit_code == 0);
  std::string ai = rrtest::read_file(tmp.path("ai.tsv"));
  CHECK(ai.find("\t3\t") != std::string::npos);
  CHECK(ai.find("\t1\t") == std::string::npos);  // no elementary rows

  // split on a pair corpus is a data error
  CliResult bad = run_cli(
      "split --triples ai.tsv --out-adv-int x.tsv --out-int-ele y.tsv", tmp.path(""));
  CHECK(bad.exit_code == 2);

  REQUIRE(run_cli("extract --corpus ose3.tsv --out f.letor --format letor " +
                      lexicon_flags(),
                  tmp.path(""))
              .exit_code == 0);
  std::string letor = rrtest::read_file(tmp.path("f.letor"));
  CHECK(letor.rfind("3 qid:art1_adv:0 1:", 0) == 0);

  REQUIRE(run_cli("extract --corpus ose3.tsv --out f.tsv " + lexicon_flags(),
                  tmp.path(""))
              .exit_code == 0);
  REQUIRE(run_cli("train --algo ranksvm --in f.tsv --out m.json", tmp.path(""))
              .exit_code == 0);
  CliResult errors = run_cli(
      "errors --model m.json --corpus ose3.tsv --out errs.tsv " + lexicon_flags(),
      tmp.path(""));
  REQUIRE(errors.exit_code == 0);
  std::string errs = rrtest::read_file(tmp.path("errs.tsv"));
  CHECK(errs.rfind("group_id\tstatus\t", 0) == 0);
}

TEST_CASE("config file supplies defaults and rejects unknown keys") {
  TempDir tmp("clicfg");
  build_toy_pipeline(tmp.path(""));

  rrtest::write_file(tmp.path("train.cfg"),
                     "algo=rankboost\nrounds=25\nseed=11\nin=ose2_feats.tsv\n"
                     "out=m_cfg.json\n");
  REQUIRE(run_cli("train --config train.cfg", tmp.path("")).exit_code == 0);
  REQUIRE(run_cli("train --algo rankboost --rounds 25 --seed 11 --in ose2_feats.tsv "
                  "--out m_flags.json",
                  tmp.path(""))
              .exit_code == 0);
  CHECK(rrtest::read_file(tmp.path("m_cfg.json")) ==
        rrtest::read_file(tmp.path("m_flags.json")));

  // Flags override config values (fewer boosting rounds -> smaller model).
  REQUIRE(run_cli("train --config train.cfg --rounds 5 --out m_override.json",
                  tmp.path(""))
              .exit_code == 0);
  CHECK(rrtest::read_file(tmp.path("m_override.json")) !=
        rrtest::read_file(tmp.path("m_flags.json")));

  rrtest::write_file(tmp.path("bad.cfg"), "algo=ranksvm\nbogus_key=1\n");
  CliResult bad = run_cli("train --config bad.cfg --in ose2_feats.tsv --out x.json",
                          tmp.path(""));
  CHECK(bad.exit_code == 1);
}
