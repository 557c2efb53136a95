#include "puf/scan.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "puf/errors.hpp"

namespace puf {

std::vector<long> squarefree_sieve(long lo, long hi)
{
    if (lo < 2 || hi < lo)
        throw UsageError("squarefree_sieve: need 2 <= lo <= hi");
    std::vector<bool> bad(static_cast<size_t>(hi - lo + 1), false);
    for (long p = 2; p * p <= hi; ++p) {
        long sq = p * p;
        for (long m = ((lo + sq - 1) / sq) * sq; m <= hi; m += sq)
            bad[static_cast<size_t>(m - lo)] = true;
    }
    std::vector<long> out;
    for (long d = lo; d <= hi; ++d)
        if (!bad[static_cast<size_t>(d - lo)])
            out.push_back(d);
    return out;
}

Analysis analyze(long d)
{
    FieldDesc field(d);
    FundamentalUnit unit = fundamental_unit(field);
    DClass dc = classify(field, unit);
    WalkResult walk = walk_classes(field);
    return {field, unit, dc, std::move(walk), predicted_class_count(dc.tag)};
}

ScanRecord to_record(const Analysis& a)
{
    ScanRecord rec;
    rec.d = a.field.d().get_si();
    rec.n_K = a.walk.n_K;
    rec.tag = a.dclass.tag;
    rec.unit_alpha = a.unit.value.a();
    rec.unit_beta = a.unit.value.b();
    rec.norm_sign = a.unit.norm_sign;
    for (const auto& c : a.walk.classes)
        rec.classes.push_back({c.pair, c.mu, c.min_vectors.size()});
    rec.predicted_n_K = a.predicted_n_K;
    if (rec.predicted_n_K)
        rec.agree = *rec.predicted_n_K == rec.n_K;
    return rec;
}

std::vector<ScanRecord> run_scan(const ScanOptions& opts)
{
    std::vector<long> ds;
    for (long d : squarefree_sieve(opts.lo, opts.hi))
        if (opts.mod4.count(static_cast<int>(d % 4)))
            ds.push_back(d);

    std::vector<std::optional<ScanRecord>> out(ds.size());
    std::atomic<size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= ds.size())
                return;
            try {
                out[i] = to_record(analyze(ds[i]));
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
                next.store(ds.size());
                return;
            }
        }
    };
    const int jobs = std::max(1, opts.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j)
            pool.emplace_back(worker);
        for (auto& t : pool)
            t.join();
    }
    if (failure)
        std::rethrow_exception(failure);

    std::vector<ScanRecord> records;
    records.reserve(out.size());
    for (auto& r : out)
        records.push_back(std::move(*r));
    return records;
}

ScanSummary summarize(const std::vector<ScanRecord>& records)
{
    ScanSummary s;
    for (const auto& r : records) {
        ++s.count_by_n_K[r.n_K];
        if (r.agree && !*r.agree)
            s.disagreements.push_back(r.d);
    }
    return s;
}

// ---- CSV ------------------------------------------------------------------

namespace {

const char* const kCsvHeader = "d,nK,tag,alpha,beta,norm,predicted_nK,agree";

std::vector<std::string> split(std::string_view line, char sep)
{
    std::vector<std::string> out;
    size_t start = 0;
    for (;;) {
        size_t pos = line.find(sep, start);
        out.emplace_back(line.substr(start, pos - start));
        if (pos == std::string_view::npos)
            return out;
        start = pos + 1;
    }
}

long parse_long(const std::string& s)
{
    try {
        size_t used = 0;
        long v = std::stol(s, &used);
        if (used != s.size())
            throw UsageError("trailing characters in integer '" + s + "'");
        return v;
    } catch (const std::logic_error&) {
        throw UsageError("malformed integer '" + s + "'");
    }
}

} // namespace

std::string scan_to_csv(const std::vector<ScanRecord>& records)
{
    std::ostringstream os;
    os << kCsvHeader << '\n';
    for (const auto& r : records) {
        os << r.d << ',' << r.n_K << ',' << to_string(r.tag) << ','
           << to_string(r.unit_alpha) << ',' << to_string(r.unit_beta) << ','
           << r.norm_sign << ',';
        if (r.predicted_n_K)
            os << *r.predicted_n_K;
        os << ',';
        if (r.agree)
            os << (*r.agree ? "true" : "false");
        os << '\n';
    }
    return os.str();
}

std::vector<ScanRecord> scan_from_csv(std::string_view text)
{
    std::vector<ScanRecord> out;
    std::istringstream is{std::string(text)};
    std::string line;
    if (!std::getline(is, line) || line != kCsvHeader)
        throw UsageError("CSV header mismatch");
    while (std::getline(is, line)) {
        if (line.empty())
            continue;
        auto f = split(line, ',');
        if (f.size() != 8)
            throw UsageError("CSV row with " + std::to_string(f.size())
                             + " fields: " + line);
        ScanRecord r;
        r.d = parse_long(f[0]);
        r.n_K = static_cast<int>(parse_long(f[1]));
        r.tag = parse_tag(f[2]);
        r.unit_alpha = parse_rat(f[3]);
        r.unit_beta = parse_rat(f[4]);
        r.norm_sign = static_cast<int>(parse_long(f[5]));
        if (!f[6].empty())
            r.predicted_n_K = static_cast<int>(parse_long(f[6]));
        if (f[7] == "true")
            r.agree = true;
        else if (f[7] == "false")
            r.agree = false;
        else if (!f[7].empty())
            throw UsageError("bad agree field '" + f[7] + "'");
        out.push_back(std::move(r));
    }
    return out;
}

// ---- JSON -----------------------------------------------------------------

nlohmann::json scan_to_json(const std::vector<ScanRecord>& records)
{
    auto arr = nlohmann::json::array();
    for (const auto& r : records) {
        nlohmann::json j;
        j["d"] = r.d;
        j["n_K"] = r.n_K;
        j["tag"] = to_string(r.tag);
        j["alpha"] = to_string(r.unit_alpha);
        j["beta"] = to_string(r.unit_beta);
        j["norm"] = r.norm_sign;
        auto cls = nlohmann::json::array();
        for (const auto& c : r.classes)
            cls.push_back({{"pair", {c.pair.p.get_str(), c.pair.q.get_str()}},
                           {"mu", to_string(c.mu)},
                           {"min_vector_count", c.min_vector_count}});
        j["classes"] = std::move(cls);
        j["predicted_n_K"] = r.predicted_n_K ? nlohmann::json(*r.predicted_n_K)
                                             : nlohmann::json(nullptr);
        j["agree"] = r.agree ? nlohmann::json(*r.agree) : nlohmann::json(nullptr);
        arr.push_back(std::move(j));
    }
    return arr;
}

std::vector<ScanRecord> scan_from_json(const nlohmann::json& j)
{
    if (!j.is_array())
        throw UsageError("scan JSON must be an array");
    std::vector<ScanRecord> out;
    try {
        for (const auto& e : j) {
            ScanRecord r;
            r.d = e.at("d").get<long>();
            r.n_K = e.at("n_K").get<int>();
            r.tag = parse_tag(e.at("tag").get<std::string>());
            r.unit_alpha = parse_rat(e.at("alpha").get<std::string>());
            r.unit_beta = parse_rat(e.at("beta").get<std::string>());
            r.norm_sign = e.at("norm").get<int>();
            for (const auto& c : e.at("classes")) {
                const auto& pr = c.at("pair");
                r.classes.push_back({{Int(pr.at(0).get<std::string>()),
                                      Int(pr.at(1).get<std::string>())},
                                     parse_rat(c.at("mu").get<std::string>()),
                                     c.at("min_vector_count").get<std::size_t>()});
            }
            if (!e.at("predicted_n_K").is_null())
                r.predicted_n_K = e.at("predicted_n_K").get<int>();
            if (!e.at("agree").is_null())
                r.agree = e.at("agree").get<bool>();
            out.push_back(std::move(r));
        }
    } catch (const nlohmann::json::exception& ex) {
        throw UsageError(std::string("malformed scan JSON: ") + ex.what());
    }
    return out;
}

namespace {

nlohmann::json coords_json(const std::vector<FieldElem>& vectors)
{
    auto arr = nlohmann::json::array();
    for (const auto& v : vectors) {
        auto [x0, x1] = basis_coords(v);
        arr.push_back({x0.get_str(), x1.get_str()});
    }
    return arr;
}

nlohmann::json params_json(const std::optional<TheoremParams>& p)
{
    if (!p)
        return nullptr;
    return {{"m", p->m.get_str()}, {"k", p->k.get_str()}, {"delta", p->delta}};
}

} // namespace

nlohmann::json analysis_to_json(const Analysis& a)
{
    nlohmann::json j;
    j["d"] = a.field.d().get_str();
    j["basis"] = a.field.basis() == BasisKind::Half ? "half" : "sqrt";
    j["unit"] = {{"alpha", to_string(a.unit.value.a())},
                 {"beta", to_string(a.unit.value.b())},
                 {"norm", a.unit.norm_sign},
                 {"text", to_string(a.unit.value)}};
    j["n_K"] = a.walk.n_K;
    j["tag"] = to_string(a.dclass.tag);
    j["params"] = params_json(a.dclass.params);
    j["predicted_n_K"] = a.predicted_n_K ? nlohmann::json(*a.predicted_n_K)
                                         : nlohmann::json(nullptr);
    j["agree"] = a.predicted_n_K ? nlohmann::json(*a.predicted_n_K == a.walk.n_K)
                                 : nlohmann::json(nullptr);
    auto cls = nlohmann::json::array();
    for (const auto& c : a.walk.classes)
        cls.push_back({{"pair", {c.pair.p.get_str(), c.pair.q.get_str()}},
                       {"form", to_string(c.form.elem())},
                       {"s", to_string(c.s)},
                       {"mu", to_string(c.mu)},
                       {"min_vectors", coords_json(c.min_vectors)}});
    j["classes"] = std::move(cls);
    return j;
}

std::string analysis_to_text(const Analysis& a)
{
    std::ostringstream os;
    os << "d = " << a.field.d().get_str() << '\n'
       << "fundamental unit: " << to_string(a.unit.value) << " (norm "
       << (a.unit.norm_sign > 0 ? "+1" : "-1") << ")\n"
       << "tag: " << to_string(a.dclass.tag);
    if (a.dclass.params)
        os << " (m=" << a.dclass.params->m.get_str()
           << ", k=" << a.dclass.params->k.get_str()
           << ", delta=" << a.dclass.params->delta << ")";
    else if (a.dclass.n)
        os << " (n=" << a.dclass.n->get_str() << ")";
    os << '\n' << "n_K = " << a.walk.n_K << '\n';
    if (a.predicted_n_K)
        os << "predicted n_K = " << *a.predicted_n_K << ", agree = "
           << (*a.predicted_n_K == a.walk.n_K ? "true" : "false") << '\n';
    for (size_t i = 0; i < a.walk.classes.size(); ++i) {
        const auto& c = a.walk.classes[i];
        os << "class " << i + 1 << ": " << to_string(c.form.elem())
           << "  mu = " << to_string(c.mu) << '\n';
        os << "  M = {";
        for (size_t k = 0; k < c.min_vectors.size(); ++k)
            os << (k ? ", " : "") << to_string(c.min_vectors[k]);
        os << "}\n";
    }
    return os.str();
}

// ---- unit cache file ------------------------------------------------------

void load_unit_cache(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        return; // a missing cache is an empty cache
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#')
            continue;
        std::istringstream ls(line);
        std::string d, alpha, beta;
        int norm_sign = 0;
        if (!(ls >> d >> alpha >> beta >> norm_sign))
            throw UsageError(path.string() + ":" + std::to_string(lineno)
                             + ": malformed cache line");
        FieldDesc field{Int(d)};
        FieldElem e(field, parse_rat(alpha), parse_rat(beta));
        if (norm(e) != norm_sign || (norm_sign != 1 && norm_sign != -1))
            throw UsageError(path.string() + ":" + std::to_string(lineno)
                             + ": norm mismatch");
        UnitCache::instance().insert(field.d(), {e, norm_sign});
    }
}

void save_unit_cache(const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out)
        throw UsageError("cannot write cache file " + path.string());
    for (const auto& [d, u] : UnitCache::instance().snapshot())
        out << d.get_str() << ' ' << to_string(u.value.a()) << ' '
            << to_string(u.value.b()) << ' ' << u.norm_sign << '\n';
    if (!out)
        throw UsageError("error writing cache file " + path.string());
}

// ---- family verification ----------------------------------------------------

bool TheoremReport::ok() const
{
    return std::all_of(checks.begin(), checks.end(),
                       [](const TheoremCheck& c) { return c.ok(); });
}

TheoremReport verify_theorem(long m_max, long k_max, const Int& d_cap)
{
    FamilyReport fam = generate_family(m_max, k_max, d_cap);
    TheoremReport report{{}, fam.rejected};
    for (const auto& p : fam.accepted) {
        TheoremCheck check{p, 0, {}};
        auto fail = [&](std::string msg) { check.failures.push_back(std::move(msg)); };
        FieldDesc field(p.d);
        FundamentalUnit unit = fundamental_unit(field);
        DClass dc = detect_theorem_case(field, unit);
        if (dc.tag != Tag::Bullet2 || !dc.params || dc.params->m != p.m
            || dc.params->k != p.k || dc.params->delta != p.delta)
            fail("detect_theorem_case does not recover (m, k, delta)");

        WalkResult walk = walk_classes(field);
        check.n_K = walk.n_K;
        if (walk.n_K != 3)
            fail("n_K = " + std::to_string(walk.n_K) + ", expected 3");

        A1A2 a12 = construct_a1_a2(field);
        UnaryForm a3 = construct_a3(field, unit);
        const FieldElem e2 = unit_square(unit);
        const std::vector<const UnaryForm*> expected{&a12.a1, &a12.a2, &a3};
        std::vector<int> hits(expected.size(), 0);
        for (const auto& c : walk.classes) {
            int matched = 0;
            for (size_t i = 0; i < expected.size(); ++i)
                if (classes_equal(c.form, *expected[i], e2, 3)) {
                    ++hits[i];
                    ++matched;
                }
            if (matched != 1)
                fail("walk class " + to_string(c.pair) + " matches "
                     + std::to_string(matched) + " closed forms");
        }
        for (size_t i = 0; i < hits.size(); ++i)
            if (hits[i] != 1)
                fail("closed form a" + std::to_string(i + 1) + " matched "
                     + std::to_string(hits[i]) + " walk classes");

        const Which which[] = {Which::A1, Which::A2, Which::A3};
        for (size_t i = 0; i < expected.size(); ++i) {
            MinData md = min_data(*expected[i]);
            auto predicted = predicted_minimal_set(which[i], field, unit);
            if (md.vectors != predicted)
                fail("M(a" + std::to_string(i + 1) + ") differs from prediction");
            Rat want = i < 2 ? Rat(1) : Rat(predicted_mu_a3({p.m, p.k, p.delta}));
            if (md.mu != want)
                fail("mu(a" + std::to_string(i + 1) + ") = " + to_string(md.mu)
                     + ", expected " + to_string(want));
        }
        report.checks.push_back(std::move(check));
    }
    return report;
}

nlohmann::json theorem_report_to_json(const TheoremReport& r)
{
    auto family_json = [](const FamilyParams& p) {
        return nlohmann::json{{"m", p.m.get_str()},     {"k", p.k.get_str()},
                              {"delta", p.delta},       {"l", p.l.get_str()},
                              {"d", p.d.get_str()},     {"alpha", p.alpha.get_str()},
                              {"beta", p.beta.get_str()}};
    };
    nlohmann::json j;
    auto checks = nlohmann::json::array();
    for (const auto& c : r.checks)
        checks.push_back({{"params", family_json(c.params)},
                          {"n_K", c.n_K},
                          {"ok", c.ok()},
                          {"failures", c.failures}});
    auto rejected = nlohmann::json::array();
    for (const auto& c : r.rejected)
        rejected.push_back({{"params", family_json(c.params)}, {"reason", c.reason}});
    j["checks"] = std::move(checks);
    j["rejected"] = std::move(rejected);
    j["ok"] = r.ok();
    j["vacuous"] = r.vacuous();
    return j;
}

} // namespace puf
