// skotch: batch front end for graph generation, labeling, decoding, attack
// simulation and parameter sweeps. Exit codes: 0 success, 2 spec/config parse
// error, 3 scheme/graph domain mismatch.

#include "skotch/acd.hpp"
#include "skotch/adversary.hpp"
#include "skotch/catalog.hpp"
#include "skotch/matching.hpp"
#include "skotch/plane.hpp"
#include "skotch/retrieval.hpp"
#include "skotch/rng.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace {

using namespace skotch;

constexpr int kExitParse = 2;
constexpr int kExitDomain = 3;

// Buffer output and write the file only on success (no partial artifacts).
void emit(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path);
}

Graph load_graph(const std::string& arg) {
    // A spec string ("matching:m=8") or a graph text file path.
    try {
        return graph_from_spec(arg);
    } catch (const std::invalid_argument&) {
        std::ifstream in(arg, std::ios::binary);
        if (!in) throw;
        return read_graph_text(in);
    }
}

const char* model_name(Model m) {
    switch (m) {
        case Model::single_vertex: return "single_vertex";
        case Model::black_box: return "black_box";
        default: return "standard";
    }
}

std::string csv_header() {
    return "scheme,graph,strategy,mode,trials,wins,rate,wilson_lo,wilson_hi,"
           "mean_queries,master_seed\n";
}

std::string csv_row(const std::string& scheme, const std::string& graph,
                    const std::string& strategy, Model model,
                    const ForgeryEstimate& e, uint64_t seed) {
    std::ostringstream row;
    row << scheme << ',' << graph << ',' << strategy << ',' << model_name(model)
        << ',' << e.trials << ',' << e.wins << ',' << std::setprecision(10)
        << e.rate << ',' << e.interval.lo << ',' << e.interval.hi << ','
        << e.mean_queries << ',' << seed << '\n';
    return row.str();
}

nlohmann::json transcript_json(const GameTranscript& t) {
    nlohmann::json j;
    j["queries"] = t.queries;
    auto pairs = nlohmann::json::array();
    for (auto [a, b] : t.pair_queries) pairs.push_back({a, b});
    j["pair_queries"] = pairs;
    if (t.candidates)
        j["candidates"] = {t.candidates->first, t.candidates->second};
    else
        j["candidates"] = nullptr;
    j["violation"] = t.violation;
    j["forfeit"] = t.forfeit;
    j["verdict"] = t.verdict;
    j["win"] = t.win;
    return j;
}

struct AttackCell {
    std::string scheme_spec, graph_spec, adv_spec;
};

// One CSV row (plus optional JSON transcripts) for a (scheme, graph, adversary)
// cell. Throws domain_error on scheme/graph or adversary/graph mismatch.
std::string run_cell(const AttackCell& cell, uint64_t trials, uint64_t seed,
                     bool serial, nlohmann::json* transcripts) {
    SchemePtr scheme = scheme_from_spec(cell.scheme_spec);
    Graph g = load_graph(cell.graph_spec);
    AdversaryPtr adv = adversary_from_spec(cell.adv_spec);
    std::string why;
    if (!scheme->accepts(g, &why)) throw std::domain_error(why);
    if (!adv->applicable(*scheme, g, &why)) throw std::domain_error(why);

    ForgeryEstimate e = estimate_forgery(*scheme, g, *adv, trials, seed, !serial);
    if (transcripts) {
        Stream root{seed};
        auto list = nlohmann::json::array();
        for (uint64_t i = 0; i < trials; ++i)
            list.push_back(
                transcript_json(run_game(*scheme, g, *adv, root.child(i).key())));
        (*transcripts)[cell.scheme_spec + "|" + cell.adv_spec] = list;
    }
    return csv_row(scheme->name(), cell.graph_spec, adv->name(), adv->model(), e,
                   seed);
}

int cmd_gen(const std::string& family, const std::string& out_path) {
    Graph g = graph_from_spec(family);
    std::ostringstream text;
    write_graph_text(text, g);
    emit(out_path, text.str());
    return 0;
}

int cmd_label(const std::string& scheme_spec, const std::string& graph_arg,
              uint64_t seed, const std::string& out_path) {
    SchemePtr scheme = scheme_from_spec(scheme_spec);
    Graph g = load_graph(graph_arg);
    std::string why;
    if (!scheme->accepts(g, &why)) {
        std::cerr << "skotch: " << why << "\n";
        return kExitDomain;
    }
    std::ostringstream text;
    write_label_map(text, scheme->encode(g, seed));
    emit(out_path, text.str());
    return 0;
}

int cmd_decode(const std::string& labels_path, int u, int v) {
    std::ifstream in(labels_path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open labels file: " + labels_path);
    LabelMap m = read_label_map(in);
    if (u < 0 || v < 0 || u >= m.n || v >= m.n)
        throw std::invalid_argument("vertex out of range");
    SchemePtr scheme = scheme_from_spec(m.scheme);
    std::cout << (scheme->decode(m.view(u), m.view(v)) ? 1 : 0) << "\n";
    return 0;
}

int cmd_plane(int p, bool dump) {
    Plane pl(p);
    std::ostringstream text;
    text << "order " << pl.order() << " size " << pl.size() << "\n";
    if (dump) {
        for (int a = 0; a < pl.size(); ++a) {
            int row_sum = 0;
            for (int b = 0; b < pl.size(); ++b) {
                bool inc = pl.incident(a, b);
                row_sum += inc;
                text << (inc ? '1' : '0');
            }
            text << "  # row sum " << row_sum << "\n";
        }
    }
    std::cout << text.str();
    return 0;
}

int cmd_retrieval_demo(uint64_t n, int r, uint64_t seed) {
    Stream rng{seed};
    std::vector<std::pair<uint64_t, uint64_t>> pairs;
    uint64_t universe = std::max<uint64_t>(2 * n + 1, 16);
    std::vector<char> used(universe, 0);
    while (pairs.size() < n) {
        uint64_t key = rng.below(universe);
        if (used[key]) continue;
        used[key] = 1;
        pairs.emplace_back(key, rng.below(uint64_t(1) << r));
    }
    Retrieval store = Retrieval::build(pairs, universe, r, rng.next());
    std::cout << "n " << n << " r " << r << " serialized_bits "
              << store.serialized_bits() << "\n";
    for (size_t i = 0; i < std::min<size_t>(pairs.size(), 8); ++i)
        std::cout << "key " << pairs[i].first << " -> " << store.query(pairs[i].first)
                  << " (stored " << pairs[i].second << ")\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"adjacency-sketch workbench"};
    app.require_subcommand(1);

    auto* gen = app.add_subcommand("gen", "generate a graph file");
    std::string gen_family, gen_out;
    gen->add_option("--family", gen_family, "graph spec, e.g. matching:m=8")
        ->required();
    gen->add_option("--out", gen_out, "output path (default stdout)");

    auto* label = app.add_subcommand("label", "encode a graph");
    std::string label_scheme, label_graph, label_out;
    uint64_t label_seed = 0;
    label->add_option("--scheme", label_scheme, "scheme spec")->required();
    label->add_option("--graph", label_graph, "graph spec or file")->required();
    label->add_option("--seed", label_seed, "encoder seed")->required();
    label->add_option("--out", label_out, "output path (default stdout)");

    auto* decode = app.add_subcommand("decode", "decode one pair from a label file");
    std::string decode_labels;
    int decode_u = 0, decode_v = 0;
    decode->add_option("--labels", decode_labels, "label map file")->required();
    decode->add_option("--u", decode_u, "first vertex")->required();
    decode->add_option("--v", decode_v, "second vertex")->required();

    auto* attack = app.add_subcommand("attack", "run forgery games");
    std::string atk_scheme, atk_graph, atk_adv, atk_out, atk_json;
    uint64_t atk_trials = 0, atk_seed = 0;
    bool atk_serial = false;
    attack->add_option("--scheme", atk_scheme, "scheme spec")->required();
    attack->add_option("--graph", atk_graph, "graph spec or file")->required();
    attack->add_option("--adv", atk_adv, "adversary spec")->required();
    attack->add_option("--trials", atk_trials, "number of games")->required();
    attack->add_option("--seed", atk_seed, "master seed")->required();
    attack->add_option("--out", atk_out, "CSV output path (default stdout)");
    attack->add_option("--json", atk_json, "also dump full transcripts (JSON)");
    attack->add_flag("--serial", atk_serial, "serial reference runner");

    auto* bench = app.add_subcommand("bench", "grid sweep of attack cells");
    std::vector<std::string> bench_schemes, bench_advs;
    std::string bench_graph, bench_out;
    uint64_t bench_trials = 0, bench_seed = 0;
    bool bench_serial = false;
    bench->add_option("--scheme", bench_schemes, "scheme specs")->required();
    bench->add_option("--adv", bench_advs, "adversary specs")->required();
    bench->add_option("--graph", bench_graph, "graph spec or file")->required();
    bench->add_option("--trials", bench_trials, "games per cell")->required();
    bench->add_option("--seed", bench_seed, "master seed")->required();
    bench->add_option("--out", bench_out, "CSV output path (default stdout)");
    bench->add_flag("--serial", bench_serial, "serial reference runner");

    auto* plane = app.add_subcommand("plane", "projective plane inspection");
    int plane_p = 2;
    bool plane_dump = false;
    plane->add_option("--p", plane_p, "plane order (prime)")->required();
    plane->add_flag("--dump", plane_dump, "print the incidence matrix");

    auto* rdemo = app.add_subcommand("retrieval-demo", "build and query a store");
    uint64_t rd_n = 16, rd_seed = 1;
    int rd_r = 8;
    rdemo->add_option("--n", rd_n, "stored key count");
    rdemo->add_option("--r", rd_r, "value bits");
    rdemo->add_option("--seed", rd_seed, "seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitParse;
    }

    try {
        if (gen->parsed()) return cmd_gen(gen_family, gen_out);
        if (label->parsed())
            return cmd_label(label_scheme, label_graph, label_seed, label_out);
        if (decode->parsed()) return cmd_decode(decode_labels, decode_u, decode_v);
        if (plane->parsed()) return cmd_plane(plane_p, plane_dump);
        if (rdemo->parsed()) return cmd_retrieval_demo(rd_n, rd_r, rd_seed);

        if (attack->parsed()) {
            if (atk_trials < 1) throw std::invalid_argument("trials must be >= 1");
            nlohmann::json transcripts;
            std::string csv = csv_header();
            csv += run_cell({atk_scheme, atk_graph, atk_adv}, atk_trials, atk_seed,
                            atk_serial, atk_json.empty() ? nullptr : &transcripts);
            emit(atk_out, csv);
            if (!atk_json.empty()) emit(atk_json, transcripts.dump(2) + "\n");
            return 0;
        }
        if (bench->parsed()) {
            if (bench_trials < 1) throw std::invalid_argument("trials must be >= 1");
            std::string csv = csv_header();
            uint64_t cell = 0;
            for (const auto& s : bench_schemes)
                for (const auto& a : bench_advs)
                    csv += run_cell({s, bench_graph, a}, bench_trials,
                                    Stream(bench_seed).child(cell++).key(),
                                    bench_serial, nullptr);
            emit(bench_out, csv);
            return 0;
        }
    } catch (const std::domain_error& e) {
        std::cerr << "skotch: domain mismatch: " << e.what() << "\n";
        return kExitDomain;
    } catch (const std::invalid_argument& e) {
        std::cerr << "skotch: " << e.what() << "\n";
        return kExitParse;
    } catch (const std::exception& e) {
        std::cerr << "skotch: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
