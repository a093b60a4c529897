#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kgalign/harness.hpp"
#include "kgalign/synth.hpp"

namespace kgalign {
namespace cli {

// BSD-style exit codes: usage/validation, malformed data, file system, and
// anything unexpected.
constexpr int kExitOk = 0;
constexpr int kExitUsage = 64;
constexpr int kExitData = 65;
constexpr int kExitIo = 66;
constexpr int kExitInternal = 70;

namespace detail {

struct Options {
    std::string kg1, kg2, names1, names2, scores, gold;
    double alpha = 0.75;
    std::size_t k_min = 20;
    double tau = 0.10;
    std::size_t top_k = 10;
    std::size_t max_rounds = 50;
    std::string orphan_mode = "top1";
    std::string normalize = "sum";
    double softmax_temp = 0.05;
    double lambda = 0.5;
    int radius = 1;
    std::string out, trace, report, stats;
    std::size_t workers = 1;
    std::uint64_t seed = 0;
    double train_frac = 0.30;
    // synth only
    std::size_t pairs = 0;
    std::size_t shared = 4;
    std::uint64_t synth_seed = 7;
    std::string out_dir;
};

inline void add_input_flags(CLI::App* sc, Options& o) {
    sc->add_option("--kg1", o.kg1, "source KG triples (head TAB relation TAB tail)");
    sc->add_option("--kg2", o.kg2, "target KG triples");
    sc->add_option("--names1", o.names1, "source surface names (id TAB name)");
    sc->add_option("--names2", o.names2, "target surface names");
    sc->add_option("--scores", o.scores,
                   "external raw scores (source TAB target TAB score); "
                   "replaces the built-in matcher");
}

inline void add_decode_flags(CLI::App* sc, Options& o) {
    sc->add_option("--alpha", o.alpha, "easy-alignment confidence threshold")
        ->capture_default_str();
    sc->add_option("--k-min", o.k_min, "minimum new easy alignments to continue")
        ->capture_default_str();
    sc->add_option("--tau", o.tau, "sub-space drop threshold")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 1.0));
    sc->add_option("--top-k", o.top_k, "candidates kept per source")->capture_default_str();
    sc->add_option("--max-rounds", o.max_rounds, "decoding round cap")->capture_default_str();
    sc->add_option("--orphan-mode", o.orphan_mode,
                   "below-threshold sources: top1 fallback or drop")
        ->capture_default_str()
        ->check(CLI::IsMember({"top1", "drop"}));
    sc->add_option("--normalize", o.normalize, "probability normalization")
        ->capture_default_str()
        ->check(CLI::IsMember({"sum", "softmax"}));
    sc->add_option("--softmax-temp", o.softmax_temp, "softmax temperature")
        ->capture_default_str();
    sc->add_option("--lambda", o.lambda, "topic-name vs neighborhood blend weight")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 1.0));
    sc->add_option("--radius", o.radius, "topic graph hop count")
        ->capture_default_str()
        ->check(CLI::Range(1, 8));
    sc->add_option("--workers", o.workers, "worker threads")->capture_default_str();
    sc->add_option("--seed", o.seed, "split/shuffle seed")->capture_default_str();
    sc->add_option("--train-frac", o.train_frac, "gold fraction held out as train")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 1.0));
}

inline void add_output_flags(CLI::App* sc, Options& o) {
    sc->add_option("--out", o.out, "result file (default: standard output)");
    sc->add_option("--trace", o.trace, "per-round decoding trace file");
    sc->add_option("--report", o.report,
                   "metrics file (key=value; a .json twin is written alongside)");
    sc->add_option("--stats", o.stats, "joint-solve stats sidecar file");
}

// Everything loaded up front so failures cannot leave partial outputs.
struct LoadedInputs {
    std::optional<KnowledgeGraph> kg_s, kg_t;
    std::unique_ptr<Scorer> scorer;
    std::optional<GoldAlignments> gold;
};

inline NormalizeOptions normalize_options(const Options& o) {
    NormalizeOptions n;
    n.mode = o.normalize == "softmax" ? NormalizeMode::Softmax : NormalizeMode::Sum;
    n.softmax_temp = o.softmax_temp;
    return n;
}

inline LoadedInputs load_inputs(const Options& o, bool need_gold) {
    if (o.scores.empty() && (o.kg1.empty() || o.kg2.empty()))
        throw CLI::ValidationError("inputs",
                                   "either --scores or both --kg1 and --kg2 are required");
    if (need_gold && o.gold.empty())
        throw CLI::ValidationError("inputs", "--gold is required for this subcommand");

    LoadedInputs in;
    if (!o.scores.empty()) {
        auto stream = tsv::open_input(o.scores);
        TableScorer::Config cfg;
        cfg.top_k = o.top_k;
        cfg.normalize = normalize_options(o);
        in.scorer = std::make_unique<TableScorer>(TableScorer::from_stream(stream, cfg));
    } else {
        in.kg_s = load_kg_files(o.kg1, o.names1);
        in.kg_t = load_kg_files(o.kg2, o.names2);
        DeskScorer::Config cfg;
        cfg.score = {o.lambda, o.radius};
        cfg.top_k = o.top_k;
        cfg.normalize = normalize_options(o);
        cfg.workers = o.workers;
        in.scorer = std::make_unique<DeskScorer>(*in.kg_s, *in.kg_t, cfg);
    }
    if (!o.gold.empty()) {
        auto stream = tsv::open_input(o.gold);
        in.gold = GoldAlignments::load(stream);
    }
    return in;
}

inline ExperimentConfig experiment_config(const Options& o, DecodeMode mode) {
    ExperimentConfig cfg;
    cfg.mode = mode;
    cfg.decode.alpha = o.alpha;
    cfg.decode.k_min = o.k_min;
    cfg.decode.tau = o.tau;
    cfg.decode.top_k = o.top_k;
    cfg.decode.max_rounds = o.max_rounds;
    cfg.orphan_mode = o.orphan_mode == "drop" ? OrphanMode::Drop : OrphanMode::Top1;
    cfg.workers = o.workers;
    cfg.train_frac = o.train_frac;
    cfg.seed = o.seed;
    return cfg;
}

// Writes to the path, or to stdout when the path is empty.
template <typename Fn>
void write_result(const std::string& path, const Fn& fn) {
    if (path.empty()) {
        fn(std::cout);
        return;
    }
    auto out = tsv::open_output(path);
    fn(out);
}

inline void write_run_outputs(const Options& o, const ExperimentResult& res) {
    write_result(o.out, [&](std::ostream& s) { res.alignments.save(s); });
    if (!o.trace.empty()) {
        auto s = tsv::open_output(o.trace);
        save_trace(res.trace, s);
    }
    if (!o.report.empty()) {
        auto kv = tsv::open_output(o.report);
        save_metrics_kv(res.report, kv);
        auto js = tsv::open_output(o.report + ".json");
        save_metrics_json(res.report, js);
    }
    if (!o.stats.empty()) {
        auto s = tsv::open_output(o.stats);
        save_jea_stats(res.jea_stats, s);
    }
}

inline int run_score(const Options& o) {
    LoadedInputs in = load_inputs(o, /*need_gold=*/false);
    std::vector<std::string> sources;
    if (in.gold) {
        GoldAlignments g = *in.gold;
        g.split(o.train_frac, o.seed);
        sources = g.test_sources();
    } else if (in.kg_s) {
        sources = in.kg_s->entity_ids();
        std::sort(sources.begin(), sources.end());
    } else {
        auto stream = tsv::open_input(o.scores);
        for (const auto& [s, list] : load_raw_scores(stream, nullptr)) sources.push_back(s);
    }
    CandidateTable table = in.scorer->score(sources, ForcedMatches{});
    write_result(o.out, [&](std::ostream& s) { save_candidate_table(table, s); });
    return kExitOk;
}

inline int run_mode(const Options& o, DecodeMode mode) {
    LoadedInputs in = load_inputs(o, /*need_gold=*/true);
    try {
        ExperimentResult res = run_experiment(experiment_config(o, mode), *in.scorer, *in.gold);
        write_run_outputs(o, res);
    } catch (const DecodeError& e) {
        std::cerr << "kgalign: " << e.what() << "\n";
        if (!o.trace.empty()) {
            auto s = tsv::open_output(o.trace);
            save_trace(e.trace(), s);
        }
        return kExitInternal;
    }
    return kExitOk;
}

inline int run_eval(const Options& o) {
    LoadedInputs in = load_inputs(o, /*need_gold=*/true);
    auto rows = run_comparison(experiment_config(o, DecodeMode::EhdJea), *in.scorer, *in.gold);
    write_result(o.out, [&](std::ostream& s) { save_comparison(rows, s); });
    return kExitOk;
}

inline int run_synth(const Options& o) {
    SynthCorpus corpus = generate_adversarial_twins(o.pairs, o.shared, o.synth_seed);
    std::filesystem::create_directories(o.out_dir);
    auto path = [&](const char* name) {
        return (std::filesystem::path(o.out_dir) / name).string();
    };
    {
        auto triples = tsv::open_output(path("kg1.tsv"));
        auto names = tsv::open_output(path("names1.tsv"));
        save_kg(corpus.kg_s, triples, &names);
    }
    {
        auto triples = tsv::open_output(path("kg2.tsv"));
        auto names = tsv::open_output(path("names2.tsv"));
        save_kg(corpus.kg_t, triples, &names);
    }
    auto gold = tsv::open_output(path("gold.tsv"));
    corpus.gold.save(gold);
    return kExitOk;
}

}  // namespace detail

inline int run(int argc, const char* const* argv) {
    detail::Options o;
    CLI::App app{"Cross-lingual KG entity alignment decoding: candidate scoring, "
                 "iterative easy-to-hard decoding, and one-to-one joint assignment."};
    app.require_subcommand(1);

    auto* score = app.add_subcommand("score", "write the normalized candidate table");
    auto* jea = app.add_subcommand("jea", "one-to-one joint assignment over sub-spaces");
    auto* ehd = app.add_subcommand("ehd", "iterative easy-to-hard decoding, top-1 finish");
    auto* decode =
        app.add_subcommand("decode", "full pipeline: easy-to-hard, joint solve on the rest");
    auto* eval = app.add_subcommand("eval", "compare baseline/ehd/jea/ehd_jea on one input");
    auto* synth = app.add_subcommand("synth", "generate an adversarial-twin corpus");

    for (CLI::App* sc : {score, jea, ehd, decode, eval}) {
        detail::add_input_flags(sc, o);
        detail::add_decode_flags(sc, o);
        detail::add_output_flags(sc, o);
        sc->add_option("--gold", o.gold, "gold alignment (source TAB target)");
    }
    synth->add_option("--pairs", o.pairs, "number of twin pairs")->required();
    synth->add_option("--shared", o.shared, "shared neighbors per twin pair")
        ->capture_default_str();
    synth->add_option("--seed", o.synth_seed, "generator seed")->capture_default_str();
    synth->add_option("--out-dir", o.out_dir, "corpus output directory")->required();

    try {
        app.parse(argc, argv);
        if (!(o.alpha > 0.0 && o.alpha <= 1.0))
            throw CLI::ValidationError("--alpha", "must be in (0, 1]");
        if (o.top_k == 0) throw CLI::ValidationError("--top-k", "must be >= 1");
        if (o.k_min == 0) throw CLI::ValidationError("--k-min", "must be >= 1");
        if (o.max_rounds == 0) throw CLI::ValidationError("--max-rounds", "must be >= 1");
        if (o.workers == 0) throw CLI::ValidationError("--workers", "must be >= 1");
        if (synth->parsed() && o.pairs == 0)
            throw CLI::ValidationError("--pairs", "must be >= 1");

        if (score->parsed()) return detail::run_score(o);
        if (jea->parsed()) return detail::run_mode(o, DecodeMode::Jea);
        if (ehd->parsed()) return detail::run_mode(o, DecodeMode::Ehd);
        if (decode->parsed()) return detail::run_mode(o, DecodeMode::EhdJea);
        if (eval->parsed()) return detail::run_eval(o);
        if (synth->parsed()) return detail::run_synth(o);
        return kExitUsage;
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    } catch (const kgalign::ParseError& e) {
        std::cerr << "kgalign: " << e.what() << "\n";
        return kExitData;
    } catch (const IoError& e) {
        std::cerr << "kgalign: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "kgalign: " << e.what() << "\n";
        return kExitInternal;
    }
}

inline int run(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.push_back("kgalign");
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace cli
}  // namespace kgalign
