// Command-line front end: exact Hall/Witt/shuffle computations for P^1 and
// curve data, plus the verification suites.
//
// Exit codes: 0 success, 1 failed verification, 2 parse/schema error,
// 3 feasibility-guard violation.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "hallcurve/json_io.hpp"
#include "hallcurve/verify.hpp"

using namespace hc;

namespace {

struct GlobalOpts {
    long q = 2;
    int trunc = 12;
    int window = 3;
    std::string mode = "numeric";
    bool json = false;
    std::string in_file;

    ScalarField field() const {
        if (mode == "numeric") return ScalarField::numeric(q);
        if (mode == "symbolic") return ScalarField::symbolic();
        throw parse_error("mode must be numeric or symbolic");
    }
    Json payload() const {
        if (in_file.empty()) {
            Json j;
            std::cin >> j;
            return j;
        }
        std::ifstream f(in_file);
        if (!f) throw parse_error("cannot open input file " + in_file);
        Json j;
        f >> j;
        return j;
    }
};

void emit(const GlobalOpts& g, const Json& j, const std::string& text) {
    if (g.json)
        std::cout << j.dump() << "\n";
    else
        std::cout << (text.empty() ? j.dump(2) : text) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hallcurve: exact Hall-algebra, Witt and shuffle computations"};
    app.require_subcommand(1);
    GlobalOpts g;
    app.add_option("--q", g.q, "base field size");
    app.add_option("--trunc", g.trunc, "series truncation order");
    app.add_option("--window", g.window, "degree window half-width");
    app.add_option("--mode", g.mode, "numeric|symbolic");
    app.add_flag("--json", g.json, "machine-readable output");
    app.add_option("--in", g.in_file, "JSON payload file (default: stdin)");

    // zeta
    auto* zeta = app.add_subcommand("zeta", "zeta function of a curve");
    int zeta_g = 0;
    std::vector<long> zeta_P;
    bool zeta_rational = false;
    int zeta_D = 6;
    zeta->add_option("--g", zeta_g, "genus");
    zeta->add_option("--P", zeta_P, "zeta numerator coefficients, constant first");
    zeta->add_flag("--rational", zeta_rational, "print the rational form");
    zeta->add_option("--places-degree", zeta_D, "truncated Euler product place bound");

    // witt
    auto* witt = app.add_subcommand("witt", "Witt vector arithmetic");
    witt->require_subcommand(1);
    auto* w_add = witt->add_subcommand("add", "boxplus of payload {\"a\":..,\"b\":..}");
    auto* w_mul = witt->add_subcommand("mul", "boxtimes of payload {\"a\":..,\"b\":..}");
    auto* w_star = witt->add_subcommand("star", "involution of payload {\"a\":..} (rank set)");
    auto* w_euler = witt->add_subcommand("euler", "Euler factor 1/B(t) of payload {\"a\":..}");
    auto* w_kappa = witt->add_subcommand("kappa", "kappa point");
    bool kappa_global_mode = false;
    long kappa_qx = 2;
    w_kappa->add_flag("--global", kappa_global_mode, "global kappa of the curve");
    w_kappa->add_option("--qx", kappa_qx, "local residue field size");
    auto* w_lhom = witt->add_subcommand("lhom", "rank-1 LHom series / closed form");
    std::string lhom_lambda = "1", lhom_mu = "1";
    bool lhom_closed_form = false;
    w_lhom->add_option("--lambda", lhom_lambda, "first twist (scalar grammar)");
    w_lhom->add_option("--mu", lhom_mu, "second twist (scalar grammar)");
    w_lhom->add_flag("--closed", lhom_closed_form, "closed form as a rational function");

    // hall
    auto* hall = app.add_subcommand("hall", "Hall algebra operations");
    hall->require_subcommand(1);
    auto* h_tmul = hall->add_subcommand("torsion-mul", "local Hall product");
    auto* h_pmul = hall->add_subcommand("p1-mul", "Hall product on Coh(P^1)");
    auto* h_comul = hall->add_subcommand("comul", "windowed comultiplication");
    int comul_r1 = 1, comul_r2 = 1;
    h_comul->add_option("--r1", comul_r1, "first rank");
    h_comul->add_option("--r2", comul_r2, "second rank");
    auto* h_hecke = hall->add_subcommand("hecke", "Hecke operator");
    bool hecke_dual = false;
    h_hecke->add_flag("--dual", hecke_dual, "dual Hecke operator");
    auto* h_psi = hall->add_subcommand("psi", "Psi series coefficient");
    std::string psi_lambda = "1";
    int psi_degree = 1;
    h_psi->add_option("--lambda", psi_lambda, "rank-1 character twist");
    h_psi->add_option("--degree", psi_degree, "torsion degree");
    auto* h_mop = hall->add_subcommand("m-op", "principal intertwiner on a rank-1 pair");
    int mop_a = 0, mop_b = 0;
    h_mop->add_option("--a", mop_a, "first degree");
    h_mop->add_option("--b", mop_b, "second degree");

    // shuffle
    auto* sh = app.add_subcommand("shuffle", "shuffle algebra operations");
    sh->require_subcommand(1);
    auto* s_mul = sh->add_subcommand("mul", "shuffle product of payload {phi, psi, kernel}");
    auto* s_smul = sh->add_subcommand("sym-mul", "symmetric shuffle with coboundary kernel");
    auto* s_rel = sh->add_subcommand("relations", "relation basis of payload {elements, kernel?}");
    auto* s_ker = sh->add_subcommand("kernel", "curve kernel");
    std::string ker_family = "rank1";
    int ker_r = 1, ker_g = 0;
    std::vector<long> ker_P;
    bool ker_tilde = false, ker_lambda = false;
    s_ker->add_option("--family", ker_family, "rank1|elliptic|lambda");
    s_ker->add_option("--r", ker_r, "root-of-unity order for the elliptic family");
    s_ker->add_option("--g", ker_g, "genus");
    s_ker->add_option("--P", ker_P, "zeta numerator coefficients");
    s_ker->add_flag("--tilde", ker_tilde, "lambda-tilde instead of lambda");
    (void)ker_lambda;

    // verify
    auto* ver = app.add_subcommand("verify", "run a verification suite");
    std::string suite = "all";
    int gen_lo = -2, gen_hi = 2, max_length = 3, torsion_max = 4;
    bool no_controls = false;
    ver->add_option("suite", suite,
                    "witt-bihom|constant-term|eisenstein-feq|main-p1|green-cross|psif-mop|all");
    ver->add_option("--gen-lo", gen_lo, "generator degree lower bound");
    ver->add_option("--gen-hi", gen_hi, "generator degree upper bound");
    ver->add_option("--max-length", max_length, "product length bound");
    ver->add_option("--torsion-max", torsion_max, "torsion degree bound");
    ver->add_flag("--no-negative-controls", no_controls, "skip the negative controls");

    // allow the global flags after subcommand names
    std::function<void(CLI::App*)> allow_fallthrough = [&](CLI::App* a) {
        a->fallthrough(true);
        for (CLI::App* sub : a->get_subcommands({})) allow_fallthrough(sub);
    };
    for (CLI::App* sub : app.get_subcommands(static_cast<bool (*)(const CLI::App*)>(nullptr)))
        allow_fallthrough(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        ScalarField fld = g.field();
        if (*zeta) {
            CurveData X{g.q, zeta_g, {Int(1)}};
            if (!zeta_P.empty()) {
                X.P.clear();
                for (long c : zeta_P) X.P.emplace_back(c);
                if (X.P[0] != 1) throw parse_error("zeta numerator needs P(0) = 1");
            }
            if (zeta_rational) {
                std::ostringstream num;
                for (size_t k = 0; k < X.P.size(); ++k) {
                    if (X.P[k] == 0) continue;
                    if (num.tellp() > 0 && X.P[k] > 0) num << "+";
                    if (k == 0)
                        num << X.P[k];
                    else {
                        if (X.P[k] == -1)
                            num << "-";
                        else if (X.P[k] != 1)
                            num << X.P[k] << "*";
                        num << "t" << (k > 1 ? "^" + std::to_string(k) : "");
                    }
                }
                std::string text = num.str() + " | (1-t)*(1-" + std::to_string(g.q) + "*t)";
                Json j;
                j["rational"] = text;
                emit(g, j, text);
            } else {
                auto series = X.zeta_truncated_product(fld, zeta_D, g.trunc);
                auto rational = X.zeta_series(fld, g.trunc);
                if (series != rational) throw internal_error("zeta forms disagree");
                emit(g, series_to_json(series), "");
            }
            return 0;
        }
        if (*witt) {
            if (*w_add || *w_mul) {
                Json p = g.payload();
                WittVector a = witt_from_json(p.at("a"), fld);
                WittVector b = witt_from_json(p.at("b"), fld);
                WittVector r = (*w_add) ? boxplus(a, b) : boxtimes(a, b);
                emit(g, witt_to_json(r), "");
            } else if (*w_star) {
                WittVector a = witt_from_json(g.payload().at("a"), fld);
                emit(g, witt_to_json(star(a)), "");
            } else if (*w_euler) {
                WittVector a = witt_from_json(g.payload().at("a"), fld);
                emit(g, series_to_json(euler_factor(a, g.trunc)), "");
            } else if (*w_kappa) {
                WittVector r = kappa_global_mode ? kappa_global(CurveData::p1(g.q), fld, g.trunc)
                                                 : kappa_local(fld, kappa_qx, g.trunc);
                emit(g, witt_to_json(r), "");
            } else if (*w_lhom) {
                CurveData X = CurveData::p1(g.q);
                Scalar lam = fld.parse(lhom_lambda), mu = fld.parse(lhom_mu);
                if (lhom_closed_form) {
                    RationalFunction r = lhom_closed(X, fld, lam, mu, var_id("t"));
                    Json j;
                    j["lhom"] = r.to_string();
                    emit(g, j, r.to_string());
                } else {
                    emit(g, series_to_json(lhom_truncated(X, fld, lam, mu, g.trunc)), "");
                }
            }
            return 0;
        }
        if (*hall) {
            CohCtx ctx{g.q, fld};
            if (*h_tmul) {
                Json p = g.payload();
                LocalHallElement f, h;
                if (p.contains("f")) {
                    f = localhall_from_json(p["f"], fld);
                    h = localhall_from_json(p.at("g"), fld);
                } else {
                    f = localhall_from_json(p, fld);
                    h = f;
                }
                emit(g, localhall_to_json(hallx_mul(f, h, g.q, fld)), "");
            } else if (*h_pmul) {
                Json p = g.payload();
                HallElt f = hall_from_json(p.at("f"), fld, g.q);
                HallElt h = hall_from_json(p.at("g"), fld, g.q);
                emit(g, hall_to_json(hall_mul(f, h, ctx)), "");
            } else if (*h_comul) {
                HallElt f = hall_from_json(g.payload().at("f"), fld, g.q);
                Tensor2 t = comult_window(f, comul_r1, comul_r2, -g.window, g.window, ctx);
                emit(g, tensor2_to_json(t), "");
            } else if (*h_hecke) {
                Json p = g.payload();
                CoherentP1 F = coherent_from_label(p.at("F").dump(), g.q);
                HallElt f = hall_from_json(p.at("f"), fld, g.q);
                HallElt r = hecke_dual ? hecke_T_dual(F.torsion, f, ctx, -g.window, g.window)
                                       : hecke_T(F.torsion, f, ctx, -g.window, g.window);
                emit(g, hall_to_json(r), "");
            } else if (*h_psi) {
                emit(g, hall_to_json(psi_coefficient(fld.parse(psi_lambda), psi_degree, ctx)), "");
            } else if (*h_mop) {
                emit(g, tensor2_to_json(m_operator_pair(mop_a, mop_b, g.window, ctx)), "");
            }
            return 0;
        }
        if (*sh) {
            if (*s_mul || *s_smul) {
                Json p = g.payload();
                ShuffleElement phi = shuffle_from_json(p.at("phi"), fld);
                ShuffleElement psi = shuffle_from_json(p.at("psi"), fld);
                Kernel k = kernel_from_json(p.at("kernel"), fld);
                ShuffleElement r = (*s_mul) ? shuffle_mul(phi, psi, k) : sym_shuffle_mul(phi, psi, k);
                emit(g, shuffle_to_json(r), "");
            } else if (*s_rel) {
                Json p = g.payload();
                std::vector<ShuffleElement> elems;
                for (const auto& e : p.at("elements")) elems.push_back(shuffle_from_json(e, fld));
                std::optional<Kernel> k;
                if (p.contains("kernel")) k = kernel_from_json(p["kernel"], fld);
                auto rels = relation_space(elems, k ? &*k : nullptr);
                Json out = Json::array();
                for (const auto& rel : rels) {
                    Json row = Json::array();
                    for (const auto& c : rel) row.push_back(c.to_string());
                    out.push_back(row);
                }
                emit(g, out, "");
            } else if (*s_ker) {
                Kernel k(fld);
                if (ker_family == "rank1") {
                    CurveData X{g.q, ker_g, {Int(1)}};
                    if (!ker_P.empty()) {
                        X.P.clear();
                        for (long c : ker_P) X.P.emplace_back(c);
                    }
                    k = curve_kernel_rank1(X, fld);
                } else if (ker_family == "elliptic") {
                    std::vector<RationalFunction> P;
                    if (ker_P.empty()) throw parse_error("elliptic family needs --P");
                    for (long c : ker_P) P.push_back(RationalFunction::constant(fld.integer(c)));
                    k = curve_kernel_elliptic(P, g.q, ker_r, fld);
                } else if (ker_family == "lambda") {
                    k = curve_kernel_lambda_p1(CurveData::p1(g.q), fld, ker_tilde);
                } else {
                    throw parse_error("unknown kernel family " + ker_family);
                }
                emit(g, kernel_to_json(k, {0}), "");
            }
            return 0;
        }
        if (*ver) {
            SuiteConfig cfg;
            cfg.q = g.q;
            cfg.trunc = g.trunc;
            cfg.window = g.window;
            cfg.gen_lo = gen_lo;
            cfg.gen_hi = gen_hi;
            cfg.max_length = max_length;
            cfg.torsion_max = torsion_max;
            cfg.negative_controls = !no_controls;
            auto reports = run_suites(suite, cfg);
            bool ok = true;
            for (const auto& r : reports) {
                ok = ok && r.all_pass();
                if (g.json)
                    std::cout << r.to_json() << "\n";
                else
                    std::cout << r.to_text();
            }
            return ok ? 0 : 1;
        }
    } catch (const guard_error& e) {
        std::cerr << "guard: " << e.what() << "\n";
        return 3;
    } catch (const parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
