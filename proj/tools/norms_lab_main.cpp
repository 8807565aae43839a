// norms-lab: exact arithmetic on the open p-adic disc over the cyclotomic
// tower, with the p-cyclic Kummer-cover verification pipeline.
//
// Canonical JSON goes to stdout; human-readable notes go to stderr. Exit
// codes: 0 success/pass, 1 verification failed, 2 invalid input,
// 3 precision exhausted.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "nlab/io.hpp"

using namespace nlab;

namespace {

json read_json_input(const std::string& path) {
    if (path == "-" || path.empty()) {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        return json::parse(buf.str());
    }
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open input file: " + path);
    json j;
    in >> j;
    return j;
}

std::vector<long> parse_coeff_list(const std::string& text) {
    std::vector<long> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back(std::stol(tok));
    }
    if (out.empty()) throw std::invalid_argument("empty coefficient list");
    return out;
}

struct LevelsArg {
    bool auto_mode = true;
    int extra = 2;
};

LevelsArg parse_levels(const std::string& text) {
    LevelsArg out;
    if (text.rfind("auto", 0) != 0)
        throw std::invalid_argument("--levels expects auto+K (e.g. auto+2)");
    if (text == "auto") return out;
    if (text[4] != '+') throw std::invalid_argument("--levels expects auto+K");
    out.extra = std::stoi(text.substr(5));
    if (out.extra < 0) throw std::invalid_argument("level count must be >= 0");
    return out;
}

void print_oort_table(const OortReport& rep) {
    std::ostream& os = std::cerr;
    os << "p = " << rep.p << ", c = " << rep.c << ", W = " << rep.w_text
       << ", precision " << rep.precision << "\n";
    os << "branch points: " << rep.branch_count << ", d_eta = " << rep.d_eta
       << ", m0 = " << rep.m0 << "\n";
    os << "  m   nu(u-1)  cond  d_m  eisenstein\n";
    for (const auto& l : rep.levels) {
        os << "  " << l.m << "   " << l.nu_u_minus_1 << "   " << l.conductor << "   "
           << l.d_m << "   " << (l.eisenstein_ok ? "ok" : "FAIL");
        if (l.cross_checked) os << "   (cross-check d = " << l.cross_different << ")";
        os << "\n";
    }
    for (const auto& pr : rep.pairs)
        os << "  pair (" << pr.m_low << "," << pr.m_high << "): nu(Q-1) >= "
           << pr.certified << " vs D = " << pr.D << (pr.ok ? "  ok" : "  FAIL") << "\n";
    os << "verdict: " << (rep.pass ? "pass" : "fail") << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"norms-lab: field-of-norms arithmetic on the open p-adic disc"};
    app.require_subcommand(1);
    app.fallthrough();

    int precision = 60;
    if (const char* env = std::getenv("NORMS_LAB_PRECISION")) precision = std::atoi(env);
    int max_level = 5;
    app.add_option("--precision", precision, "working relative precision (p-adic digits)");
    app.add_option("--max-level", max_level, "largest tower level the CLI will touch");

    // padic
    auto* padic = app.add_subcommand("padic", "Q_p element utilities");
    auto* teich = padic->add_subcommand("teichmuller", "Teichmuller representative");
    long t_p = 3, t_r = 1;
    teich->add_option("--p", t_p, "odd prime")->required();
    teich->add_option("--r", t_r, "residue in F_p^x")->required();
    auto* round = padic->add_subcommand("roundtrip", "parse and re-render an element");
    std::string round_text;
    round->add_option("--text", round_text, "textual element literal")->required();

    // weierstrass
    auto* wz = app.add_subcommand("weierstrass", "Weierstrass preparation");
    auto* prep = wz->add_subcommand("prep", "prepare a series document");
    std::string prep_in = "-";
    prep->add_option("input", prep_in, "series JSON file (or - for stdin)");

    // ram
    auto* ram = app.add_subcommand("ram", "ramification profiles");
    auto* prof = ram->add_subcommand("profile", "filtration of L^top | L^base");
    long r_p = 3;
    int r_base = 0, r_top = 1;
    prof->add_option("--p", r_p, "odd prime")->required();
    prof->add_option("--base", r_base, "base level (0 = Q_p)")->required();
    prof->add_option("--top", r_top, "top level")->required();

    // fon
    auto* fon = app.add_subcommand("fon", "field-of-norms sequences");
    auto* fcheck = fon->add_subcommand("check", "verify norm compatibility");
    std::string fcheck_in = "-";
    long fcheck_min = -1;
    fcheck->add_option("input", fcheck_in, "sequence JSON file (or - for stdin)");
    fcheck->add_option("--min-exponent", fcheck_min,
                       "required certified exponent (default: clean at precision)");
    auto* fadd = fon->add_subcommand("add", "norm-limit addition");
    std::string fadd_a, fadd_b;
    int fadd_probe = 0;
    fadd->add_option("--a", fadd_a, "first sequence JSON file")->required();
    fadd->add_option("--b", fadd_b, "second sequence JSON file")->required();
    fadd->add_option("--probe", fadd_probe, "probe depth M")->required();
    auto* ffrom = fon->add_subcommand("from-series", "sequence of a polynomial over F_p");
    long ff_p = 3;
    std::string ff_coeffs;
    int ff_lo = 1, ff_hi = 2, ff_probe = 3;
    ffrom->add_option("--p", ff_p, "odd prime")->required();
    ffrom->add_option("--coeffs", ff_coeffs, "comma-separated residues a0,a1,...")->required();
    ffrom->add_option("--lo", ff_lo, "lowest level");
    ffrom->add_option("--hi", ff_hi, "highest level");
    ffrom->add_option("--probe", ff_probe, "probe depth M")->required();

    // oort
    auto* oort = app.add_subcommand("oort", "p-cyclic cover verification");
    auto* overify = oort->add_subcommand("verify", "run the full pipeline");
    long o_p = 3, o_c = 1;
    std::string o_w = "1";
    std::string o_levels = "auto+2";
    bool o_cross = false;
    overify->add_option("--p", o_p, "odd prime")->required();
    overify->add_option("--c", o_c, "conductor parameter, prime to p")->required();
    overify->add_option("--w", o_w, "unit series W, e.g. \"1\" or \"1 + Z^4\"");
    overify->add_option("--levels", o_levels, "auto+K: levels m0..m0+K");
    overify->add_flag("--cross-check", o_cross,
                      "explicit root adjunction at p = 3, m <= 2");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;  // help exits cleanly, parse errors are input errors
    }

    try {
        if (precision < 20 || precision > kMaxRelPrec)
            throw std::invalid_argument("precision must be in [20, " +
                                        std::to_string(kMaxRelPrec) + "]");
        if (teich->parsed()) {
            Tower tw(t_p, precision);
            if (((t_r % t_p) + t_p) % t_p == 0)
                throw std::invalid_argument("residue must be nonzero mod p");
            auto x = tw.teich(t_r);
            json j = to_json(x);
            j["text"] = x.render();
            std::cout << canonical_dump(j);
            return 0;
        }
        if (round->parsed()) {
            auto x = padic_parse(round_text);
            json j = to_json(x);
            j["text"] = x.render();
            std::cout << canonical_dump(j);
            return 0;
        }
        if (prep->parsed()) {
            json in = read_json_input(prep_in);
            std::string ring = in.at("ring").get<std::string>();
            if (ring == "Zp") {
                auto s = zp_series_from_json(in);
                auto w = weierstrass_prepare(s);
                std::cout << canonical_dump(to_json(w, s.ring.ctx->p));
            } else {
                auto s = cyclo_series_from_json(in);
                auto w = weierstrass_prepare(s);
                std::cout << canonical_dump(to_json(w, s.ring.level->p()));
            }
            return 0;
        }
        if (prof->parsed()) {
            if (r_top > max_level)
                throw std::invalid_argument("top level exceeds --max-level");
            auto profile = filtration(Extension{r_p, r_base, r_top});
            std::cout << canonical_dump(to_json(profile));
            return 0;
        }
        if (fcheck->parsed()) {
            auto seq = sequence_from_json(read_json_input(fcheck_in));
            auto rep = check_compatibility(
                seq, fcheck_min >= 0 ? std::optional<long>(fcheck_min) : std::nullopt);
            std::cout << canonical_dump(to_json(rep));
            return rep.pass ? 0 : 1;
        }
        if (fadd->parsed()) {
            auto a = sequence_from_json(read_json_input(fadd_a));
            auto b = sequence_from_json(read_json_input(fadd_b));
            if (a.hi > max_level || b.hi > max_level)
                throw std::invalid_argument("sequence exceeds --max-level");
            Tower tw(a.p, precision);
            auto res = fon_add(tw, a, b, fadd_probe);
            std::cout << canonical_dump(to_json(res));
            return 0;
        }
        if (ffrom->parsed()) {
            if (ff_probe > max_level)
                throw std::invalid_argument("probe depth exceeds --max-level");
            Tower tw(ff_p, precision);
            auto seq = series_to_sequence(tw, parse_coeff_list(ff_coeffs), ff_lo, ff_hi,
                                          ff_probe);
            std::cout << canonical_dump(to_json(seq));
            return 0;
        }
        if (overify->parsed()) {
            auto levels = parse_levels(o_levels);
            Tower tw(o_p, precision);
            auto spec = make_kummer_spec(tw, o_c, parse_w_polynomial(o_w));
            int m0 = compute_m0(tw, spec);
            if (m0 + levels.extra > max_level)
                throw std::invalid_argument(
                    "levels m0.." + std::to_string(m0 + levels.extra) +
                    " exceed --max-level " + std::to_string(max_level));
            auto rep = verify(tw, spec, levels.extra, o_cross);
            std::cout << canonical_dump(to_json(rep));
            print_oort_table(rep);
            return rep.pass ? 0 : 1;
        }
        throw std::invalid_argument("no subcommand action matched");
    } catch (const PrecisionExhausted& e) {
        std::cerr << "precision exhausted: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
