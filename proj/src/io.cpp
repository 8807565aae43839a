#include "nlab/io.hpp"

#include <sstream>

namespace nlab {

namespace {

json rat_to_json(const Rat& r) {
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

}  // namespace

json to_json(const PAdicNumber& x) {
    json j;
    j["p"] = x.p();
    if (x.is_exact_zero()) {
        j["val"] = "inf";
        j["digits"] = json::array();
        j["relprec"] = 0;
        return j;
    }
    j["val"] = x.valuation_lower_bound();
    j["relprec"] = x.relprec();
    json digits = json::array();
    mpz_class u = x.unit();
    while (u != 0) {
        mpz_class d = u % x.p();
        digits.push_back(d.get_si());
        u /= x.p();
    }
    j["digits"] = std::move(digits);
    return j;
}

PAdicNumber padic_from_json(const json& j) {
    long p = j.at("p").get<long>();
    const PadicContext& ctx = padic_context(p);
    if (j.at("val").is_string()) {
        if (j.at("val").get<std::string>() != "inf")
            throw std::invalid_argument("val must be an integer or \"inf\"");
        return PAdicNumber::zero(ctx);
    }
    long val = j.at("val").get<long>();
    int relprec = j.at("relprec").get<int>();
    if (relprec == 0) return PAdicNumber::apparent_zero(ctx, val);
    mpz_class u = 0;
    const auto& digits = j.at("digits");
    for (size_t i = digits.size(); i-- > 0;) {
        u *= p;
        u += mpz_class(digits[i].get<long>());
    }
    return PAdicNumber::make(ctx, val, u, relprec);
}

json to_json(const CycloElement& x) {
    json j;
    j["p"] = x.level()->p();
    j["m"] = x.level()->m();
    json coeffs = json::array();
    for (const auto& c : x.coords()) coeffs.push_back(to_json(c));
    j["coeffs"] = std::move(coeffs);
    return j;
}

CycloElement cyclo_from_json(const json& j) {
    long p = j.at("p").get<long>();
    int m = j.at("m").get<int>();
    auto lv = tower_level(p, m);
    Coords c;
    for (const auto& cj : j.at("coeffs")) c.push_back(padic_from_json(cj));
    return CycloElement::from_coords(lv, std::move(c));
}

namespace {

template <typename Ring>
json series_to_json_impl(const PowerSeries<Ring>& s, const std::string& tag, long p) {
    json j;
    j["ring"] = tag;
    j["p"] = p;
    j["M"] = s.M;
    if (s.tail == kNoTail)
        j["tail"] = nullptr;
    else
        j["tail"] = s.tail;
    json coeffs = json::array();
    for (const auto& c : s.a) coeffs.push_back(to_json(c));
    j["coeffs"] = std::move(coeffs);
    return j;
}

}  // namespace

json to_json(const PowerSeries<ZpSeriesRing>& s) {
    return series_to_json_impl(s, "Zp", s.ring.ctx->p);
}

json to_json(const PowerSeries<CycloSeriesRing>& s) {
    return series_to_json_impl(s, s.ring.tag(), s.ring.level->p());
}

PowerSeries<ZpSeriesRing> zp_series_from_json(const json& j) {
    if (j.at("ring").get<std::string>() != "Zp")
        throw std::invalid_argument("expected a Zp series document");
    ZpSeriesRing ring(padic_context(j.at("p").get<long>()));
    std::vector<PAdicNumber> coeffs;
    for (const auto& cj : j.at("coeffs")) coeffs.push_back(padic_from_json(cj));
    long M = j.at("M").get<long>();
    bool exact = j.at("tail").is_null();
    auto s = make_series(ring, std::move(coeffs), M, exact);
    if (!exact) s.tail = j.at("tail").get<long>();
    return s;
}

PowerSeries<CycloSeriesRing> cyclo_series_from_json(const json& j) {
    std::string tag = j.at("ring").get<std::string>();
    if (tag == "Zp") throw std::invalid_argument("expected a cyclotomic-ring series");
    int m = tag == "R1" ? 1 : std::stoi(tag.substr(1));
    CycloSeriesRing ring(tower_level(j.at("p").get<long>(), m));
    std::vector<CycloElement> coeffs;
    for (const auto& cj : j.at("coeffs")) coeffs.push_back(cyclo_from_json(cj));
    long M = j.at("M").get<long>();
    bool exact = j.at("tail").is_null();
    auto s = make_series(ring, std::move(coeffs), M, exact);
    if (!exact) s.tail = j.at("tail").get<long>();
    return s;
}

namespace {

template <typename Ring>
json factorization_to_json_impl(const WeierstrassFactorization<Ring>& w) {
    json j;
    j["c"] = w.c;
    json f;
    f["degree"] = w.f.degree();
    json low = json::array();
    for (const auto& a : w.f.low) low.push_back(to_json(a));
    f["low"] = std::move(low);
    j["f"] = std::move(f);
    j["U"] = to_json(w.U);
    return j;
}

}  // namespace

json to_json(const WeierstrassFactorization<ZpSeriesRing>& w, long) {
    return factorization_to_json_impl(w);
}
json to_json(const WeierstrassFactorization<CycloSeriesRing>& w, long) {
    return factorization_to_json_impl(w);
}

json to_json(const NormSequence& s) {
    json j;
    j["p"] = s.p;
    j["range"] = json::array({s.lo, s.hi});
    json comps = json::array();
    for (const auto& c : s.comps) comps.push_back(to_json(c));
    j["components"] = std::move(comps);
    json w = json::array();
    for (long k : s.witnesses) w.push_back(k);
    j["witnesses"] = std::move(w);
    return j;
}

NormSequence sequence_from_json(const json& j) {
    long p = j.at("p").get<long>();
    int lo = j.at("range")[0].get<int>();
    int hi = j.at("range")[1].get<int>();
    std::vector<CycloElement> comps;
    for (const auto& cj : j.at("components")) comps.push_back(cyclo_from_json(cj));
    auto s = NormSequence::unchecked(p, lo, hi, std::move(comps));
    if (j.contains("witnesses"))
        for (const auto& wj : j.at("witnesses")) s.witnesses.push_back(wj.get<long>());
    return s;
}

json to_json(const CompatReport& r) {
    json j;
    j["pass"] = r.pass;
    j["common_valuation_ok"] = r.common_valuation_ok;
    j["first_failing_level"] = r.first_failing_level;
    json pairs = json::array();
    for (const auto& pr : r.pairs) {
        json e;
        e["m"] = pr.m;
        e["certified"] = pr.certified;
        e["clean"] = pr.clean;
        pairs.push_back(std::move(e));
    }
    j["pairs"] = std::move(pairs);
    return j;
}

json to_json(const AddResult& r) {
    json j;
    j["sequence"] = to_json(r.sequence);
    j["probe_depth"] = r.probe_depth;
    json stab = json::array();
    for (const auto& st : r.stability) {
        json e;
        e["m"] = st.m;
        e["observed"] = st.observed;
        e["required"] = st.required;
        e["ok"] = st.ok;
        stab.push_back(std::move(e));
    }
    j["stability"] = std::move(stab);
    json ac = json::array();
    for (long k : r.approx_congruence) ac.push_back(k);
    j["approx_congruence"] = std::move(ac);
    return j;
}

json to_json(const RamificationProfile& prof) {
    json j;
    j["p"] = prof.ext.p;
    j["base"] = prof.ext.base_m;
    j["top"] = prof.ext.top_m;
    j["group_order"] = prof.group_order;
    json itab;
    for (const auto& [a, i] : prof.i_table) itab[std::to_string(a)] = i;
    j["i_table"] = std::move(itab);
    json lj = json::array();
    for (long v : prof.lower_jumps) lj.push_back(v);
    j["lower_jumps"] = std::move(lj);
    json uj = json::array();
    for (const Rat& u : prof.upper_jumps) uj.push_back(rat_to_json(u));
    j["upper_jumps"] = std::move(uj);
    json phi = json::array();
    for (const auto& [x, y] : prof.phi.breakpoints())
        phi.push_back(json::array({rat_to_json(x), rat_to_json(y)}));
    j["phi_breakpoints"] = std::move(phi);
    json slopes = json::array();
    for (const Rat& s : prof.phi.slopes()) slopes.push_back(rat_to_json(s));
    j["phi_slopes"] = std::move(slopes);
    j["conductor"] = prof.conductor;
    j["different_degree"] = prof.different_degree;
    return j;
}

json to_json(const OortReport& rep) {
    json j;
    j["p"] = rep.p;
    j["c"] = rep.c;
    j["W"] = rep.w_text;
    j["precision"] = rep.precision;
    j["branch_count"] = rep.branch_count;
    j["d_eta"] = rep.d_eta;
    j["m0"] = rep.m0;
    json levels = json::array();
    for (const auto& lr : rep.levels) {
        json e;
        e["m"] = lr.m;
        e["nu_u_minus_1"] = lr.nu_u_minus_1;
        e["conductor"] = lr.conductor;
        e["d_m"] = lr.d_m;
        e["eisenstein_ok"] = lr.eisenstein_ok;
        if (lr.cross_checked) e["cross_different"] = lr.cross_different;
        levels.push_back(std::move(e));
    }
    j["levels"] = std::move(levels);
    json pairs = json::array();
    for (const auto& pr : rep.pairs) {
        json e;
        e["m_low"] = pr.m_low;
        e["m_high"] = pr.m_high;
        e["D"] = pr.D;
        e["certified"] = pr.certified;
        e["ok"] = pr.ok;
        pairs.push_back(std::move(e));
    }
    j["pairs"] = std::move(pairs);
    j["verdict"] = rep.pass ? "pass" : "fail";
    j["first_fail"] = rep.first_fail;
    return j;
}

std::string canonical_dump(const json& j) { return j.dump(2) + "\n"; }

std::vector<long> parse_w_polynomial(const std::string& text) {
    std::vector<long> coeffs;
    auto put = [&](size_t idx, long v) {
        if (coeffs.size() <= idx) coeffs.resize(idx + 1, 0);
        coeffs[idx] += v;
    };
    size_t i = 0;
    auto skip = [&] { while (i < text.size() && isspace(static_cast<unsigned char>(text[i]))) ++i; };
    skip();
    if (i == text.size()) throw std::invalid_argument("empty polynomial");
    while (i < text.size()) {
        long coef = 1;
        bool have_coef = false;
        if (isdigit(static_cast<unsigned char>(text[i]))) {
            size_t start = i;
            while (i < text.size() && isdigit(static_cast<unsigned char>(text[i]))) ++i;
            coef = std::stol(text.substr(start, i - start));
            have_coef = true;
            skip();
            if (i < text.size() && text[i] == '*') {
                ++i;
                skip();
            }
        }
        if (i < text.size() && (text[i] == 'Z' || text[i] == 'z')) {
            ++i;
            long e = 1;
            skip();
            if (i < text.size() && text[i] == '^') {
                ++i;
                skip();
                size_t start = i;
                while (i < text.size() && isdigit(static_cast<unsigned char>(text[i]))) ++i;
                if (start == i) throw std::invalid_argument("exponent expected after ^");
                e = std::stol(text.substr(start, i - start));
            }
            put(static_cast<size_t>(e), coef);
        } else if (have_coef) {
            put(0, coef);
        } else {
            throw std::invalid_argument("malformed polynomial term near position " +
                                        std::to_string(i));
        }
        skip();
        if (i < text.size()) {
            if (text[i] != '+') throw std::invalid_argument("terms must be joined by '+'");
            ++i;
            skip();
        }
    }
    return coeffs;
}

}  // namespace nlab
