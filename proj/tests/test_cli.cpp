#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "skotch/graph.hpp"
#include "skotch/scheme.hpp"

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <sys/wait.h>
#include <unistd.h>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int status = -1;
    std::string out;
};

const char* cli_path() {
    const char* p = std::getenv("SKOTCH_CLI");
    REQUIRE_MESSAGE(p != nullptr, "SKOTCH_CLI must point at the CLI binary");
    return p;
}

RunResult run(const std::string& args) {
    std::string cmd = std::string(cli_path()) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    char buf[4096];
    size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
    int rc = pclose(pipe);
    r.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    return r;
}

fs::path temp_file(const std::string& name) {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() /
                     ("skotch-cli-test-" + std::to_string(getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir / name;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

size_t count_lines(const std::string& s) {
    size_t n = 0;
    for (char c : s) n += c == '\n';
    return n;
}

} // namespace

TEST_CASE("gen writes parseable graph text") {
    RunResult r = run("gen --family matching:m=3");
    CHECK(r.status == 0);
    std::istringstream in(r.out);
    skotch::Graph g = skotch::read_graph_text(in);
    CHECK(g.n == 6);
    CHECK(g.edge_count() == 3);

    fs::path out = temp_file("graph.txt");
    CHECK(run("gen --family path:n=5 --out " + out.string()).status == 0);
    std::ifstream f(out);
    skotch::Graph p = skotch::read_graph_text(f);
    CHECK(p.n == 5);
    CHECK(p.edge_count() == 4);
}

TEST_CASE("label/decode round trip through files") {
    fs::path graph = temp_file("m4.txt");
    REQUIRE(run("gen --family matching:m=4 --out " + graph.string()).status == 0);
    fs::path labels = temp_file("m4.labels");
    RunResult lab = run("label --scheme pp-matching:eps=7/10 --graph " +
                        graph.string() + " --seed 5 --out " + labels.string());
    CHECK(lab.status == 0);
    {
        std::ifstream in(labels);
        skotch::LabelMap m = skotch::read_label_map(in);
        CHECK(m.scheme == "pp-matching(7/10)");
        CHECK(m.n == 8);
        CHECK(m.label_bits == 3);
    }
    // matched pairs decode 1
    RunResult d01 = run("decode --labels " + labels.string() + " --u 0 --v 1");
    CHECK(d01.status == 0);
    CHECK(d01.out == "1\n");
    RunResult d02 = run("decode --labels " + labels.string() + " --u 0 --v 2");
    CHECK(d02.status == 0);
    CHECK((d02.out == "0\n" || d02.out == "1\n"));
    // vertex out of range -> parse-class failure
    CHECK(run("decode --labels " + labels.string() + " --u 0 --v 9").status == 2);
}

TEST_CASE("labeling is deterministic in the seed, spec strings work directly") {
    RunResult a = run("label --scheme color3 --graph path:n=6 --seed 11");
    RunResult b = run("label --scheme color3 --graph path:n=6 --seed 11");
    RunResult c = run("label --scheme color3 --graph path:n=6 --seed 12");
    CHECK(a.status == 0);
    CHECK(a.out == b.out);
    CHECK(a.out != c.out);
}

TEST_CASE("attack emits one deterministic CSV row") {
    const std::string cell = "attack --scheme pp-matching:eps=1/4 "
                             "--graph matching:m=8 --adv random-pair "
                             "--trials 50 --seed 3";
    RunResult a = run(cell);
    CHECK(a.status == 0);
    CHECK(a.out.rfind("scheme,graph,strategy,mode,trials,wins,rate,wilson_lo,"
                      "wilson_hi,mean_queries,master_seed\n", 0) == 0);
    CHECK(count_lines(a.out) == 2);
    std::string row = a.out.substr(a.out.find('\n') + 1);
    CHECK(row.rfind("pp-matching(1/4),matching:m=8,random-pair,standard,50,", 0) == 0);
    // bit-identical across repeats and across the serial reference runner
    CHECK(run(cell).out == a.out);
    CHECK(run(cell + " --serial").out == a.out);
}

TEST_CASE("attack transcript JSON") {
    fs::path json_path = temp_file("games.json");
    RunResult r = run("attack --scheme pp-matching:eps=1/4 --graph matching:m=4 "
                      "--adv random-pair --trials 5 --seed 1 --json " +
                      json_path.string());
    CHECK(r.status == 0);
    auto doc = nlohmann::json::parse(slurp(json_path));
    REQUIRE(doc.size() == 1);
    const auto& games = doc.begin().value();
    REQUIRE(games.size() == 5);
    for (const auto& g : games) {
        CHECK(g.contains("queries"));
        CHECK(g.contains("candidates"));
        CHECK(g["win"].is_boolean());
        CHECK_FALSE(g["violation"].get<bool>());
    }
}

TEST_CASE("attack argument and domain failures") {
    // trials must be >= 1 -> parse-class exit
    CHECK(run("attack --scheme pp-matching:eps=1/4 --graph matching:m=4 "
              "--adv random-pair --trials 0 --seed 1").status == 2);
    // missing required option
    CHECK(run("attack --scheme pp-matching:eps=1/4 --graph matching:m=4 "
              "--adv random-pair --seed 1").status == 2);
    // scheme/graph mismatch -> domain exit, and no partial output file
    fs::path out = temp_file("never.csv");
    RunResult dom = run("attack --scheme pp-matching:eps=1/4 --graph path:n=6 "
                        "--adv random-pair --trials 10 --seed 1 --out " +
                        out.string());
    CHECK(dom.status == 3);
    CHECK_FALSE(fs::exists(out));
    // adversary/graph mismatch is also a domain failure
    CHECK(run("attack --scheme pp-matching:eps=7/10 --graph matching:m=7 "
              "--adv pigeonhole --trials 10 --seed 1").status == 3);
}

TEST_CASE("label domain mismatch leaves no output file") {
    fs::path out = temp_file("never.labels");
    RunResult r = run("label --scheme pp-matching:eps=1/4 --graph path:n=4 "
                      "--seed 1 --out " + out.string());
    CHECK(r.status == 3);
    CHECK_FALSE(fs::exists(out));
}

TEST_CASE("bad specs exit with the parse code") {
    CHECK(run("gen --family bogus:x=1").status == 2);
    CHECK(run("gen --family matching:m=0").status == 2);
    CHECK(run("label --scheme nope --graph matching:m=2 --seed 1").status == 2);
    CHECK(run("label --scheme pp-matching:eps=5/4 --graph matching:m=2 --seed 1")
              .status == 2);
    CHECK(run("nonsense-subcommand").status == 2);
}

TEST_CASE("bench sweeps the scheme x adversary grid") {
    RunResult r = run("bench --scheme pp-matching:eps=1/4 "
                      "--scheme pp-matching:eps=7/10 --adv random-pair "
                      "--adv pug:alpha=1/3 --graph matching:m=6 "
                      "--trials 20 --seed 4");
    CHECK(r.status == 0);
    CHECK(count_lines(r.out) == 5); // header + 2 x 2 cells
    CHECK(r.out.find("pp-matching(1/4)") != std::string::npos);
    CHECK(r.out.find("pp-matching(7/10)") != std::string::npos);
    CHECK(r.out.find("pug-statistics") != std::string::npos);
    CHECK(run("bench --scheme color3 --adv random-pair --graph path:n=4 "
              "--trials 0 --seed 4").status == 2);
}

TEST_CASE("plane inspection") {
    RunResult r = run("plane --p 2 --dump");
    CHECK(r.status == 0);
    CHECK(r.out.rfind("order 2 size 7\n", 0) == 0);
    CHECK(count_lines(r.out) == 8);
    size_t sums = 0, pos = 0;
    while ((pos = r.out.find("# row sum 3", pos)) != std::string::npos) {
        ++sums;
        ++pos;
    }
    CHECK(sums == 7); // every element incident with exactly p + 1 = 3 others
    CHECK(run("plane --p 4").status == 2); // not a prime order
}

TEST_CASE("retrieval demo queries return the stored values") {
    RunResult r = run("retrieval-demo --n 5 --r 4 --seed 9");
    CHECK(r.status == 0);
    CHECK(r.out.find("n 5 r 4 serialized_bits") != std::string::npos);
    // every printed "key k -> v (stored w)" line must have v == w
    std::istringstream in(r.out);
    std::string line;
    int checked = 0;
    while (std::getline(in, line)) {
        auto arrow = line.find("-> ");
        auto stored = line.find("(stored ");
        if (arrow == std::string::npos || stored == std::string::npos) continue;
        std::string got = line.substr(arrow + 3, line.find(' ', arrow + 3) - arrow - 3);
        std::string want = line.substr(stored + 8, line.find(')') - stored - 8);
        CHECK(got == want);
        ++checked;
    }
    CHECK(checked == 5);
}
