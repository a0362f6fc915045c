// Command-line front end: kernel evaluation, arc enumeration, gcd profiles,
// admissible-pair and box counting, configuration graphs, constructions, and
// the probe drivers. Exit codes: 0 success, 1 failed assertion, 2 usage error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "qlab/arcs.hpp"
#include "qlab/constructions.hpp"
#include "qlab/counting.hpp"
#include "qlab/expsum.hpp"
#include "qlab/graph.hpp"
#include "qlab/labels.hpp"
#include "qlab/probes.hpp"
#include "qlab/rational.hpp"

using nlohmann::json;
using namespace qlab;

namespace {

std::string rat_str(const Rat& r) { return r.str(); }

json point_json(const TorusPoint& z) { return json::array({rat_str(z.x), rat_str(z.t)}); }

std::vector<TorusPoint> read_points(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open points file: " + path);
    json j = json::parse(in);
    std::vector<TorusPoint> pts;
    for (const auto& e : j) {
        TorusPoint z;
        z.x = parse_rat(e.at(0).get<std::string>());
        z.t = parse_rat(e.at(1).get<std::string>());
        pts.push_back(z);
    }
    return pts;
}

void write_output(const std::string& out_dir, const std::string& name, const std::string& text) {
    if (out_dir.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::filesystem::create_directories(out_dir);
    std::ofstream f(out_dir + "/" + name, std::ios::binary);
    f << text;
}

json graph_json(const ConfigGraph& g) {
    json j;
    j["R"] = g.R();
    j["edges"] = g.edge_count();
    j["K_emp"] = g.edge_count() == 0 ? -1.0 : g.K_emp();
    json vs = json::array();
    for (const auto& z : g.vertices) vs.push_back(point_json(z));
    j["vertices"] = vs;
    json es = json::array();
    for (const auto& [key, w] : g.labels)
        es.push_back(json{{"i", key.first}, {"j", key.second}, {"a", w.a}, {"b", w.b}, {"q", w.q}});
    j["edge_labels"] = es;
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exponential-sum level set laboratory"};
    app.require_subcommand(1);
    std::string out_dir;
    app.add_option("--out", out_dir, "output directory (default: stdout)");

    // kernel
    auto* kernel = app.add_subcommand("kernel", "evaluate the weighted quadratic kernel");
    i64 kN = 1 << 10;
    double kx = 0.0, kt = 0.0;
    i64 kQ = 0, ksamples = 1000;
    int kl = 0;
    std::uint64_t kseed = 1;
    kernel->add_option("--N", kN);
    kernel->add_option("--x", kx);
    kernel->add_option("--t", kt);
    kernel->add_option("--Q", kQ, "run the on/off-arc ratio report at this block");
    kernel->add_option("--l", kl);
    kernel->add_option("--samples", ksamples);
    kernel->add_option("--seed", kseed);

    // arcs
    auto* arcs = app.add_subcommand("arcs", "enumerate or count arc cells");
    i64 aN = 1 << 10, aQ = 4;
    int al = 0;
    bool alist = false;
    arcs->add_option("--N", aN);
    arcs->add_option("--Q", aQ);
    arcs->add_option("--l", al);
    arcs->add_flag("--list", alist, "emit the cell list as CSV");

    // profile
    auto* profile = app.add_subcommand("profile", "gcd profile of two labels");
    i64 pa1 = 1, pb1 = 0, pq1 = 1, pa2 = 1, pb2 = 0, pq2 = 1;
    profile->add_option("--a1", pa1);
    profile->add_option("--b1", pb1);
    profile->add_option("--q1", pq1)->required();
    profile->add_option("--a2", pa2);
    profile->add_option("--b2", pb2);
    profile->add_option("--q2", pq2)->required();

    // admissible
    auto* adm = app.add_subcommand("admissible", "enumerate admissible pairs");
    std::string ax = "0/1", at = "0/1";
    i64 admN = 1 << 10, admQ = 8, admD = 1, admP = 1, admF = 1;
    int adml = 0;
    adm->add_option("--x", ax);
    adm->add_option("--t", at);
    adm->add_option("--N", admN);
    adm->add_option("--Q", admQ);
    adm->add_option("--l", adml);
    adm->add_option("--D", admD);
    adm->add_option("--P", admP);
    adm->add_option("--F", admF);

    // boxes
    auto* boxes = app.add_subcommand("boxes", "box census over a level");
    i64 bN = 1 << 10, bQ = 8;
    int bl = 2;
    bool bnb = false, bsmall = false;
    boxes->add_option("--N", bN);
    boxes->add_option("--Q", bQ);
    boxes->add_option("--l", bl);
    boxes->add_flag("--nb", bnb, "full tuple counts N_B");
    boxes->add_flag("--small", bsmall, "distinct-key counts n_B");

    // graph
    auto* graph = app.add_subcommand("graph", "build and analyze a configuration graph");
    std::string gpoints;
    i64 gN = 1 << 10, gQ = 8;
    int gl = 0;
    bool ganalyze = false;
    double gK = 0.0;
    graph->add_option("--points", gpoints, "JSON file of [x,t] rational pairs")->required();
    graph->add_option("--N", gN);
    graph->add_option("--Q", gQ);
    graph->add_option("--l", gl);
    graph->add_flag("--analyze", ganalyze, "dominant triple and fork report");
    graph->add_option("--K", gK, "density parameter (default: empirical)");

    // construct
    auto* con = app.add_subcommand("construct", "emit a named point construction");
    std::string ckind = "fixed_denominator";
    i64 cq = 5, cQ = 64, cQ1 = 8, cQ2 = 16, cdd = 0, cR = 64, cN = 1 << 10;
    int cl = 2;
    double cM = 1.0;
    std::uint64_t cseed = 1;
    con->add_option("--kind", ckind)->required();
    con->add_option("--q", cq);
    con->add_option("--Q", cQ);
    con->add_option("--Q1", cQ1);
    con->add_option("--Q2", cQ2);
    con->add_option("--d", cdd);
    con->add_option("--R", cR);
    con->add_option("--N", cN);
    con->add_option("--l", cl);
    con->add_option("--M", cM);
    con->add_option("--seed", cseed);

    // probe
    auto* probe = app.add_subcommand("probe", "run an experiment probe");
    std::string prkind, prconfig;
    std::uint64_t prseed = 0;
    bool prhaveseed = false;
    probe->add_option("--kind", prkind);
    probe->add_option("--config", prconfig, "JSON config file");
    probe->add_option("--seed", prseed)->each([&](const std::string&) { prhaveseed = true; });

    CLI11_PARSE(app, argc, argv);

    try {
        if (*kernel) {
            if (kQ > 0) {
                auto rep = kernel_bound_report(kN, DyadicLevel{kQ, kl}, ksamples, kseed);
                json j;
                j["N"] = rep.N;
                j["Q"] = rep.level.Q;
                j["l"] = rep.level.l;
                j["max_on_ratio"] = rep.max_on_ratio;
                j["max_off_ratio"] = rep.max_off_ratio;
                j["off_rejections"] = rep.off_rejections;
                j["off_sampling_failed"] = rep.off_sampling_failed;
                write_output(out_dir, "kernel_report.json", j.dump(2));
            } else {
                cd v = eval_kernel(kN, kx, kt);
                std::printf("(%.*g, %.*g) abs=%.*g\n", 17, v.real(), 17, v.imag(), 17, std::abs(v));
            }
        } else if (*arcs) {
            DyadicLevel level{aQ, al};
            if (alist) {
                std::string csv = "q,a,b,x_lo,x_hi,t_lo,t_hi\n";
                for (const auto& c : enumerate_arcs(level, aN, Rat(1)))
                    csv += std::to_string(c.q) + "," + std::to_string(c.a) + "," + std::to_string(c.b) +
                           "," + c.x_lo.str() + "," + c.x_hi.str() + "," + c.t_lo.str() + "," +
                           c.t_hi.str() + "\n";
                write_output(out_dir, "arcs.csv", csv);
            } else {
                std::printf("%lld\n", (long long)count_arcs(level));
            }
        } else if (*profile) {
            GcdProfile g = gcd_profile(LabeledDiff{pa1, pb1, pq1}, LabeledDiff{pa2, pb2, pq2});
            json j;
            j["d"] = g.d;
            j["m1"] = g.m1;
            j["m2"] = g.m2;
            j["p"] = g.p;
            j["f"] = g.f;
            j["t_sum"] = g.t_sum.str();
            j["x_sum"] = std::to_string(g.x_sum_num) + "/" + std::to_string(g.x_sum_den);
            write_output(out_dir, "profile.json", j.dump(2));
        } else if (*adm) {
            AdmissibleQuery q;
            q.x = parse_rat(ax);
            q.t = parse_rat(at);
            q.N = admN;
            q.level = DyadicLevel{admQ, adml};
            q.D = admD;
            q.P = admP;
            q.F = admF;
            json out = json::array();
            for (const auto& pr : enumerate_admissible(q)) {
                json e;
                e["q1"] = pr.q1;
                e["q2"] = pr.q2;
                e["d"] = pr.d;
                e["p"] = pr.p;
                json ws = json::array();
                for (const auto& w : pr.witnesses)
                    ws.push_back(json::array({w.a1, w.a2, w.b1, w.b2, w.f}));
                e["witnesses"] = ws;
                out.push_back(e);
            }
            write_output(out_dir, "admissible.json", out.dump(2));
        } else if (*boxes) {
            unsigned variants = 0;
            if (bnb) variants |= CENSUS_NB;
            if (bsmall) variants |= CENSUS_SMALL_NB;
            if (!variants) variants = CENSUS_NB;
            BoxCensus census = box_census(bN, DyadicLevel{bQ, bl}, variants);
            std::string csv = "ix,it,N_B,N_B_star,n_B,n_B_star,n_B_sep\n";
            for (const auto& [key, c] : census.boxes)
                csv += std::to_string(key.first) + "," + std::to_string(key.second) + "," +
                       std::to_string(c.N_B) + "," + std::to_string(c.N_B_star) + "," +
                       std::to_string(c.n_B) + "," + std::to_string(c.n_B_star) + "," +
                       std::to_string(c.n_B_sep) + "\n";
            write_output(out_dir, "boxes.csv", csv);
        } else if (*graph) {
            auto pts = read_points(gpoints);
            ConfigGraph g = build_graph(pts, gN, DyadicLevel{gQ, gl});
            json j = graph_json(g);
            if (ganalyze) {
                double K = gK > 0.0 ? gK : g.K_emp();
                DominantTriple dom = dominant_triple(g, K);
                j["dominant"] = json::array({dom.D, dom.P, dom.F});
                j["dominant_sum"] = dom.group_sum;
                ForkChain fork = extract_fork(g, dom.D, dom.P, dom.F);
                ForkReport fr = fork_structure_check(fork);
                j["fork"] = json{{"v1", fork.v1},
                                 {"v3", fork.v3},
                                 {"S", fork.S.size()},
                                 {"S_prime", fork.S_prime.size()},
                                 {"S_dprime", fork.S_dprime.size()},
                                 {"S_tprime", fork.S_tprime.size()},
                                 {"fixed_d", fork.fixed_d},
                                 {"fixed_p", fork.fixed_p},
                                 {"fixed_f", fork.fixed_f},
                                 {"violations", fr.violations}};
                if (fr.violations > 0) {
                    write_output(out_dir, "graph.json", j.dump(2));
                    return 1;
                }
            }
            write_output(out_dir, "graph.json", j.dump(2));
        } else if (*con) {
            json j;
            std::vector<TorusPoint> pts;
            std::map<std::string, double> predicted;
            if (ckind == "fixed_denominator") {
                auto c = build_fixed_denominator(cq);
                pts = c.points;
                predicted = c.predicted;
            } else if (ckind == "prime_reciprocal") {
                auto c = build_prime_reciprocal(cQ, cdd);
                pts = c.points;
                predicted = c.predicted;
            } else if (ckind == "bipartite") {
                auto c = build_bipartite(cQ1, cQ2);
                pts = c.points;
                predicted = c.predicted;
            } else if (ckind == "sharp_c1") {
                auto c = build_sharp_c1(cN, cq, DyadicLevel{dyadic_block(cq), cl}, cM);
                pts = c.points;
                predicted = c.predicted;
            } else if (ckind == "random_baseline") {
                auto c = build_random_baseline(cR, cN, DyadicLevel{cQ, cl}, cseed);
                pts = c.points;
                predicted = c.predicted;
            } else if (ckind == "enemies") {
                auto e = build_enemies(cN, cQ, cq, 2, 1 % cq, 1 % cq);
                j["x"] = e.x.str();
                j["t"] = e.t.str();
                json fr = json::array();
                for (const auto& f : e.fractions) fr.push_back(f.str());
                j["fractions"] = fr;
                write_output(out_dir, "construct.json", j.dump(2));
                return 0;
            } else {
                std::fprintf(stderr, "unknown construction kind: %s\n", ckind.c_str());
                return 2;
            }
            j["kind"] = ckind;
            json ps = json::array();
            for (const auto& z : pts) ps.push_back(point_json(z));
            j["points"] = ps;
            j["predicted"] = predicted;
            write_output(out_dir, "construct.json", j.dump(2));
        } else if (*probe) {
            ProbeConfig cfg;
            if (!prconfig.empty()) {
                std::ifstream in(prconfig);
                if (!in) {
                    std::fprintf(stderr, "cannot open config: %s\n", prconfig.c_str());
                    return 2;
                }
                std::stringstream ss;
                ss << in.rdbuf();
                cfg = ProbeConfig::parse(ss.str());
            }
            if (!prkind.empty()) cfg.kind = prkind;
            if (prhaveseed) cfg.seed = prseed;
            ProbeReport rep = run_probe(cfg);
            write_output(out_dir, "report.json", rep.to_json());
            write_output(out_dir, "report.csv", rep.to_csv());
            std::fprintf(stderr, "wall_seconds=%.3f\n", rep.wall_seconds);
            if (!rep.passed()) return 1;
        }
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
