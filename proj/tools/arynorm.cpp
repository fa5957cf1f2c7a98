// arynorm: command-line front end for the normalization toolkit.

#include <CLI11.hpp>

#include <pthread.h>
#include <signal.h>
#include <unistd.h>

#include <atomic>
#include <fstream>
#include <iostream>
#include <thread>

#include "ary/builder.hpp"
#include "ary/corpus.hpp"
#include "ary/embeddings.hpp"
#include "ary/error.hpp"
#include "ary/evaluate.hpp"
#include "ary/lexicon.hpp"
#include "ary/normalizer.hpp"
#include "ary/pipeline.hpp"
#include "ary/review.hpp"
#include "ary/review_server.hpp"
#include "ary/simscore.hpp"
#include "ary/synth.hpp"
#include "ary/text.hpp"

namespace {

using namespace ary;

/// Usage problems found after CLI11 parsing (bad enum value, ...).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ScoreKind score_kind(const std::string& s) {
  auto k = parse_score_kind(s);
  if (!k) throw UsageError("unknown method '" + s + "' (lexim, seqmatch, seqmatch_skeleton, seqmatch_soundex)");
  return *k;
}

Algorithm algorithm(const std::string& s) {
  auto a = parse_algorithm(s);
  if (!a) throw UsageError("unknown algorithm '" + s + "' (cbow, skipgram, subword)");
  return *a;
}

std::vector<VectorModel> load_models(const std::vector<std::string>& paths) {
  std::vector<VectorModel> models;
  for (const auto& p : paths) models.push_back(load_vectors(p));
  return models;
}

void print_warning(const std::string& w) { std::cerr << "warning: " << w << '\n'; }

void write_or_print(const std::string& body, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << body;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw Error("cannot write " + out);
  f << body;
}

struct ReportOpts {
  std::string format = "table";
  std::string out;
};

void add_report_opts(CLI::App* cmd, ReportOpts& o) {
  cmd->add_option("--format", o.format, "table or tsv")->check(CLI::IsMember({"table", "tsv"}));
  cmd->add_option("--out", o.out, "write the report here instead of stdout");
}

void emit_report(const std::vector<ReportRow>& rows, std::string_view label, const ReportOpts& o) {
  write_or_print(o.format == "tsv" ? format_report_tsv(rows, label) : format_report_table(rows, label), o.out);
}

void add_train_opts(CLI::App* cmd, TrainConfig& t) {
  cmd->add_option("--dim", t.dim, "vector dimension")->capture_default_str();
  cmd->add_option("--window", t.window, "context window")->capture_default_str();
  cmd->add_option("--min-count", t.min_count, "minimum word count")->capture_default_str();
  cmd->add_option("--epochs", t.epochs)->capture_default_str();
  cmd->add_option("--negatives", t.negatives, "negative samples per target")->capture_default_str();
  cmd->add_option("--lr", t.initial_lr, "initial learning rate (0 = per-algorithm default)")->capture_default_str();
  cmd->add_option("--subsample", t.subsample_t, "frequent-word subsampling threshold")->capture_default_str();
  cmd->add_option("--seed", t.seed)->capture_default_str();
  cmd->add_option("--minn", t.subword_min_n, "shortest character n-gram (subword)")->capture_default_str();
  cmd->add_option("--maxn", t.subword_max_n, "longest character n-gram (subword)")->capture_default_str();
  cmd->add_option("--buckets", t.bucket_count, "n-gram hash buckets (subword)")->capture_default_str();
  cmd->add_option("--threads", t.threads, "training threads; 1 is reproducible")->capture_default_str();
}

void add_clean_opts(CLI::App* cmd, CleanConfig& c) {
  cmd->add_option("--latin-threshold", c.latin_threshold, "minimum share of Latin letters")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  cmd->add_option("--min-tokens", c.min_tokens, "shortest sentence kept")->capture_default_str();
  cmd->add_option("--max-run", c.max_run, "longest repeated-character run kept as is")->capture_default_str();
}

// Runs the server until SIGINT or SIGTERM. Signals are blocked in every
// thread and collected by one waiter with sigwait.
void serve_until_signal(ReviewServer& server) {
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);
  std::atomic<bool> done{false};
  std::thread waiter([&] {
    int sig = 0;
    sigwait(&set, &sig);
    if (!done) server.stop();
  });
  server.listen();
  done = true;
  ::kill(::getpid(), SIGTERM);  // release the waiter
  waiter.join();
}

int run(int argc, char** argv) {
  CLI::App app{"Arabizi normalization dictionary toolkit", "arynorm"};
  app.require_subcommand(1);
  app.set_version_flag("--version", ARY_VERSION);

  // ingest
  std::string ingest_in, ingest_out;
  std::size_t max_items = 0;
  CleanConfig clean;
  auto* ingest = app.add_subcommand("ingest", "clean raw comments into a corpus");
  ingest->add_option("--in", ingest_in, "text/.jsonl file, or http(s):// / file:// paginated endpoint")->required();
  ingest->add_option("--out", ingest_out, "output directory (corpus.txt, stats.tsv)")->required();
  ingest->add_option("--max-items", max_items, "stop after this many comments (0 = all)");
  add_clean_opts(ingest, clean);
  ingest->add_option("--threads", clean.threads, "cleaning threads (0 = hardware)");

  // lexicon
  auto* lex = app.add_subcommand("lexicon", "lexicon conversion and validation");
  lex->require_subcommand(1);
  std::string lex_in, lex_out, lex_path;
  auto* lex_convert = lex->add_subcommand("convert", "convert an adapted-IPA lexicon to Latin script");
  lex_convert->add_option("--in", lex_in)->required()->check(CLI::ExistingFile);
  lex_convert->add_option("--out", lex_out)->required();
  auto* lex_validate = lex->add_subcommand("validate", "check a lexicon file");
  lex_validate->add_option("path", lex_path)->required();

  // train
  std::string train_corpus, train_out, train_algo = "skipgram", train_id;
  TrainConfig tc;
  auto* trn = app.add_subcommand("train", "train word vectors");
  trn->add_option("--corpus", train_corpus, "cleaned corpus")->required()->check(CLI::ExistingFile);
  trn->add_option("--algo", train_algo, "skipgram, cbow or subword")->capture_default_str();
  trn->add_option("--out", train_out, "vector file")->required();
  trn->add_option("--id", train_id, "model id recorded in dictionary sources (default: algorithm)");
  add_train_opts(trn, tc);

  // neighbors
  std::string nb_model, nb_word;
  std::size_t nb_k = 20;
  bool nb_oov = false;
  auto* nb = app.add_subcommand("neighbors", "nearest neighbors of a word");
  nb->add_option("--model", nb_model)->required()->check(CLI::ExistingFile);
  nb->add_option("--word", nb_word)->required();
  nb->add_option("--k", nb_k)->capture_default_str();
  nb->add_flag("--oov", nb_oov, "compose a vector for unknown words (subword models)");

  // score
  std::string sc_method = "seqmatch_skeleton", sc_a, sc_b;
  auto* sc = app.add_subcommand("score", "lexical similarity of two words");
  sc->add_option("--method", sc_method)->capture_default_str();
  sc->add_option("--a", sc_a)->required();
  sc->add_option("--b", sc_b)->required();

  // build
  std::vector<std::string> models;
  std::string lexicon_path, build_out, method = "seqmatch_skeleton";
  BuildConfig bc;
  auto* bld = app.add_subcommand("build", "build the normalization dictionary");
  bld->add_option("--models", models, "vector files")->required()->delimiter(',');
  bld->add_option("--lexicon", lexicon_path)->required()->check(CLI::ExistingFile);
  bld->add_option("--k", bc.k, "neighbors per canonical")->capture_default_str();
  bld->add_option("--method", method)->capture_default_str();
  bld->add_option("--threshold", bc.method.threshold)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  bld->add_flag("--subword-oov", bc.subword_oov, "let subword models answer for unseen canonicals");
  bld->add_option("--threads", bc.threads, "0 = hardware");
  bld->add_option("--out", build_out)->required();

  // eval
  std::string dict_path, reference_path;
  ReportOpts report;
  auto* evl = app.add_subcommand("eval", "precision and coverage of a dictionary");
  evl->add_option("--dict", dict_path)->required()->check(CLI::ExistingFile);
  evl->add_option("--reference", reference_path)->required()->check(CLI::ExistingFile);
  evl->add_option("--lexicon", lexicon_path)->required()->check(CLI::ExistingFile);
  add_report_opts(evl, report);

  // sweep / compare-models / compare-scorers
  std::vector<double> thresholds{0.60, 0.65, 0.70, 0.75, 0.80};
  std::vector<std::string> methods{"lexim", "seqmatch", "seqmatch_skeleton", "seqmatch_soundex"};
  auto add_model_eval = [&](CLI::App* cmd) {
    cmd->add_option("--models", models, "vector files")->required()->delimiter(',');
    cmd->add_option("--lexicon", lexicon_path)->required()->check(CLI::ExistingFile);
    cmd->add_option("--reference", reference_path)->required()->check(CLI::ExistingFile);
    cmd->add_option("--k", bc.k)->capture_default_str();
    cmd->add_flag("--subword-oov", bc.subword_oov);
    add_report_opts(cmd, report);
  };
  auto* swp = app.add_subcommand("sweep", "evaluate the merged build at several thresholds");
  add_model_eval(swp);
  swp->add_option("--thresholds", thresholds)->delimiter(',')->check(CLI::Range(0.0, 1.0))->capture_default_str();
  swp->add_option("--method", method)->capture_default_str();
  auto* cmpm = app.add_subcommand("compare-models", "evaluate each model and their union");
  add_model_eval(cmpm);
  cmpm->add_option("--method", method)->capture_default_str();
  cmpm->add_option("--threshold", bc.method.threshold)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  auto* cmps = app.add_subcommand("compare-scorers", "evaluate the merged build under each lexical scorer");
  add_model_eval(cmps);
  cmps->add_option("--methods", methods)->delimiter(',')->capture_default_str();
  cmps->add_option("--threshold", bc.method.threshold)->check(CLI::Range(0.0, 1.0))->capture_default_str();

  // normalize
  std::string norm_in, norm_out, on_ambiguous = "leave", counts_corpus;
  bool no_preprocess = false;
  auto* nrm = app.add_subcommand("normalize", "rewrite text with the dictionary (stdin/stdout by default)");
  nrm->add_option("--dict", dict_path)->required()->check(CLI::ExistingFile);
  nrm->add_option("--lexicon", lexicon_path)->required()->check(CLI::ExistingFile);
  nrm->add_option("--in", norm_in, "input text (default stdin)");
  nrm->add_option("--out", norm_out, "output text (default stdout)");
  nrm->add_option("--on-ambiguous", on_ambiguous, "leave or most-frequent")->capture_default_str();
  nrm->add_option("--corpus", counts_corpus, "cleaned corpus supplying counts for most-frequent");
  nrm->add_flag("--no-preprocess", no_preprocess, "input is already tokenized; only split on whitespace");

  // serve
  std::string corpus_path, log_path, ui_dir, host = "127.0.0.1";
  int port = 8080;
  auto* srv = app.add_subcommand("serve", "review server for candidate pairs");
  srv->add_option("--dict", dict_path)->required()->check(CLI::ExistingFile);
  srv->add_option("--corpus", corpus_path)->required()->check(CLI::ExistingFile);
  srv->add_option("--lexicon", lexicon_path)->required()->check(CLI::ExistingFile);
  srv->add_option("--port", port, "0 picks a free port")->check(CLI::Range(0, 65535))->capture_default_str();
  srv->add_option("--host", host)->capture_default_str();
  srv->add_option("--log", log_path, "decision log (JSON lines)")->required();
  srv->add_option("--ui", ui_dir, "static review UI bundle")->check(CLI::ExistingDirectory);

  // synth
  std::string synth_out;
  SynthConfig syn;
  auto* snt = app.add_subcommand("synth", "write the planted-variant fixture");
  snt->add_option("--out", synth_out)->required();
  snt->add_option("--seed", syn.seed)->capture_default_str();
  snt->add_option("--canonicals", syn.canonicals)->capture_default_str();
  snt->add_option("--frames", syn.frames_per_group)->capture_default_str();

  // e2e
  PipelineConfig pc;
  std::vector<std::string> algos{"cbow", "skipgram", "subword"};
  auto* e2e = app.add_subcommand("e2e", "ingest, train, build and evaluate in one run");
  e2e->add_option("--in", pc.input, "raw comments or endpoint")->required();
  e2e->add_option("--lexicon", pc.lexicon)->required()->check(CLI::ExistingFile);
  e2e->add_option("--reference", pc.reference)->required()->check(CLI::ExistingFile);
  e2e->add_option("--out", pc.out_dir)->required();
  e2e->add_option("--algos", algos)->delimiter(',')->capture_default_str();
  e2e->add_option("--k", pc.build.k)->capture_default_str();
  e2e->add_option("--method", method)->capture_default_str();
  e2e->add_option("--threshold", pc.build.method.threshold)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  e2e->add_flag("--subword-oov", pc.build.subword_oov);
  e2e->add_flag("--deterministic", pc.deterministic, "single-threaded training, fixed timestamps");
  add_clean_opts(e2e, pc.clean);
  add_train_opts(e2e, pc.train);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*ingest) {
      const auto raw = load_comments(ingest_in, max_items);
      CleanStats stats;
      const auto corpus = clean_corpus(raw, clean, &stats);
      std::filesystem::create_directories(ingest_out);
      write_corpus(corpus, std::filesystem::path(ingest_out) / "corpus.txt");
      write_stats(corpus, stats, std::filesystem::path(ingest_out) / "stats.tsv");
      std::cerr << corpus.size() << " sentences, " << corpus.vocab_counts().size() << " unique words ("
                << stats.non_latin << " non-Latin, " << stats.too_short << " too short, " << stats.duplicates
                << " duplicates dropped)\n";
    } else if (*lex_convert) {
      std::ifstream in(lex_in, std::ios::binary);
      const std::string body((std::istreambuf_iterator<char>(in)), {});
      const auto lexicon = convert_lexicon(body, print_warning);
      save_lexicon(lexicon, lex_out);
      std::cerr << lexicon.size() << " entries\n";
    } else if (*lex_validate) {
      const auto lexicon = load_lexicon(lex_path);
      std::cout << lexicon.size() << " entries OK\n";
    } else if (*trn) {
      tc.algorithm = algorithm(train_algo);
      const auto corpus = read_corpus(train_corpus);
      const auto model = train(corpus, tc, train_id.empty() ? train_algo : train_id);
      save_vectors(model, train_out);
      std::cerr << model.size() << " words x " << model.dim() << "\n";
    } else if (*nb) {
      const auto model = load_vectors(nb_model);
      for (const auto& n : most_similar(model, nb_word, nb_k, nb_oov))
        std::cout << n.word << '\t' << format_fixed(n.score, 6) << '\n';
    } else if (*sc) {
      std::cout << format_fixed(score(sc_a, sc_b, score_kind(sc_method)), 6) << '\n';
    } else if (*bld) {
      bc.method.kind = score_kind(method);
      const auto lexicon = load_lexicon(lexicon_path);
      const auto dict = build_dictionary(load_models(models), lexicon, bc, print_warning);
      save_dictionary(dict, build_out);
      std::cerr << dict.size() << " pairs, " << conflicts(dict).size() << " conflicting transliterations\n";
    } else if (*evl) {
      const auto rows = std::vector<ReportRow>{
          {"dictionary", evaluate(load_dictionary(dict_path), load_reference(reference_path), load_lexicon(lexicon_path))}};
      emit_report(rows, "dictionary", report);
    } else if (*swp) {
      emit_report(threshold_sweep(load_models(models), load_lexicon(lexicon_path), load_reference(reference_path),
                                  thresholds, score_kind(method), bc.k, bc.subword_oov),
                  "threshold", report);
    } else if (*cmpm) {
      bc.method.kind = score_kind(method);
      emit_report(compare_models(load_models(models), load_lexicon(lexicon_path), load_reference(reference_path),
                                 bc.method, bc.k, bc.subword_oov),
                  "model", report);
    } else if (*cmps) {
      std::vector<ScoreKind> kinds;
      for (const auto& m : methods) kinds.push_back(score_kind(m));
      emit_report(compare_scorers(load_models(models), load_lexicon(lexicon_path), load_reference(reference_path),
                                  kinds, bc.k, bc.method.threshold, bc.subword_oov),
                  "method", report);
    } else if (*nrm) {
      NormalizePolicy policy;
      auto p = parse_policy(on_ambiguous);
      if (!p) throw UsageError("unknown --on-ambiguous value '" + on_ambiguous + "' (leave, most-frequent)");
      policy.on_ambiguous = *p;
      policy.preprocess = !no_preprocess;
      std::optional<Corpus> counts;
      if (!counts_corpus.empty()) counts = read_corpus(counts_corpus);
      if (policy.on_ambiguous == AmbiguityPolicy::most_frequent && !counts)
        throw UsageError("--on-ambiguous most-frequent needs --corpus");
      const auto dict = load_dictionary(dict_path);
      const auto lexicon = load_lexicon(lexicon_path);
      const Normalizer normalizer(dict, lexicon, policy, counts ? &counts->vocab_counts() : nullptr);
      std::ifstream fin;
      std::ofstream fout;
      if (!norm_in.empty() && norm_in != "-") {
        fin.open(norm_in, std::ios::binary);
        if (!fin) throw Error("cannot open " + norm_in);
      }
      if (!norm_out.empty() && norm_out != "-") {
        fout.open(norm_out, std::ios::binary);
        if (!fout) throw Error("cannot write " + norm_out);
      }
      normalizer.normalize_stream(fin.is_open() ? fin : std::cin, fout.is_open() ? static_cast<std::ostream&>(fout) : std::cout);
    } else if (*srv) {
      ReviewService service(load_dictionary(dict_path), load_lexicon(lexicon_path), read_corpus(corpus_path), log_path);
      ServerOptions options;
      if (!ui_dir.empty()) options.static_dir = ui_dir;
      ReviewServer server(service, options);
      const int bound = server.bind(host, port);
      std::cerr << "listening on http://" << host << ':' << bound << "\n";
      serve_until_signal(server);
    } else if (*snt) {
      const auto s = generate_synthetic(syn);
      write_synthetic(s, synth_out);
      std::cerr << s.comments.size() << " comments, " << s.lexicon.size() << " lexicon entries, "
                << s.reference.size() << " reference pairs\n";
    } else if (*e2e) {
      pc.build.method.kind = score_kind(method);
      pc.algorithms.clear();
      for (const auto& a : algos) pc.algorithms.push_back(algorithm(a));
      run_pipeline(pc, &std::cerr);
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
