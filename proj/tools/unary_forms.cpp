// unary-forms: command-line front end.
//
// Exit codes: 0 success, 1 assertion failure (prediction mismatch or a
// failed family check), 2 usage/input error, 3 internal error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "puf/errors.hpp"
#include "puf/scan.hpp"
#include "puf/traceform.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitAssert = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInternal = 3;

int cmd_analyze(long d, bool json)
{
    puf::Analysis a = puf::analyze(d);
    if (json)
        std::cout << puf::analysis_to_json(a).dump(2) << '\n';
    else
        std::cout << puf::analysis_to_text(a);
    if (a.predicted_n_K && *a.predicted_n_K != a.walk.n_K)
        return kExitAssert;
    return kExitOk;
}

std::set<int> parse_mod4(const std::string& list)
{
    std::set<int> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item != "1" && item != "2" && item != "3")
            throw puf::UsageError("--mod4 takes a subset of 1,2,3");
        out.insert(item[0] - '0');
    }
    if (out.empty())
        throw puf::UsageError("--mod4 must not be empty");
    return out;
}

struct ScanArgs {
    long lo = 2;
    long hi = 2;
    std::string mod4 = "1,2,3";
    int jobs = 1;
    std::string out;
    std::string format = "csv";
    std::string cache;
};

int cmd_scan(const ScanArgs& args)
{
    if (args.lo < 2 || args.hi < args.lo)
        throw puf::UsageError("scan needs 2 <= lo <= hi");
    std::ofstream file;
    if (!args.out.empty()) {
        file.open(args.out);
        if (!file)
            throw puf::UsageError("cannot open output file " + args.out);
    }
    if (!args.cache.empty())
        puf::load_unit_cache(args.cache);

    puf::ScanOptions opts;
    opts.lo = args.lo;
    opts.hi = args.hi;
    opts.mod4 = parse_mod4(args.mod4);
    opts.jobs = args.jobs;
    auto records = puf::run_scan(opts);

    std::ostream& os = args.out.empty() ? std::cout : file;
    if (args.format == "json")
        os << puf::scan_to_json(records).dump(1) << '\n';
    else
        os << puf::scan_to_csv(records);
    os.flush();
    if (!os)
        throw puf::UsageError("error writing scan output");
    if (!args.cache.empty())
        puf::save_unit_cache(args.cache);

    auto summary = puf::summarize(records);
    std::cerr << "scanned " << records.size() << " fields;";
    for (const auto& [nk, count] : summary.count_by_n_K)
        std::cerr << " n_K=" << nk << ":" << count;
    std::cerr << "; disagreements: " << summary.disagreements.size();
    for (long d : summary.disagreements)
        std::cerr << ' ' << d;
    std::cerr << '\n';
    return summary.disagreements.empty() ? kExitOk : kExitAssert;
}

int cmd_verify(long m_max, long k_max, long d_cap, bool json)
{
    if (m_max < 1 || k_max < 1 || d_cap < 1)
        throw puf::UsageError("verify-theorem bounds must be positive");
    auto report = puf::verify_theorem(m_max, k_max, d_cap);
    if (json) {
        std::cout << puf::theorem_report_to_json(report).dump(2) << '\n';
    } else {
        for (const auto& c : report.checks) {
            std::cout << (c.ok() ? "PASS" : "FAIL") << " d=" << c.params.d.get_str()
                      << " m=" << c.params.m.get_str() << " k=" << c.params.k.get_str()
                      << " delta=" << c.params.delta << " n_K=" << c.n_K << '\n';
            for (const auto& f : c.failures)
                std::cout << "    " << f << '\n';
        }
        std::cout << report.checks.size() << " family members checked, "
                  << report.rejected.size() << " candidates rejected";
        if (report.vacuous())
            std::cout << " (vacuous: no accepted members)";
        std::cout << '\n';
    }
    return report.ok() ? kExitOk : kExitAssert;
}

int cmd_oracle(long d, const std::string& alpha, const std::string& beta, long box)
{
    puf::FieldDesc field(d);
    puf::UnaryForm a(puf::FieldElem(field, puf::parse_rat(alpha), puf::parse_rat(beta)));
    puf::Int b = box > 0 ? puf::Int(box) : puf::certified_box(a);
    puf::MinData md = puf::brute_force_min(a, b);
    std::cout << "form: " << puf::to_string(a.elem()) << '\n'
              << "box: " << b.get_str() << '\n'
              << "mu = " << puf::to_string(md.mu) << '\n'
              << "M = {";
    for (size_t i = 0; i < md.vectors.size(); ++i)
        std::cout << (i ? ", " : "") << puf::to_string(md.vectors[i]);
    std::cout << "}\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Perfect unary forms over real quadratic fields"};
    app.require_subcommand(1);

    long analyze_d = 0;
    bool analyze_json = false;
    auto* analyze = app.add_subcommand("analyze", "Walk the perfect forms of Q(sqrt d)");
    analyze->add_option("d", analyze_d, "squarefree d >= 2")->required();
    analyze->add_flag("--json", analyze_json, "JSON output");

    ScanArgs scan_args;
    auto* scan = app.add_subcommand("scan", "Analyze every squarefree d in [lo, hi]");
    scan->add_option("lo", scan_args.lo)->required();
    scan->add_option("hi", scan_args.hi)->required();
    scan->add_option("--mod4", scan_args.mod4, "residues of d mod 4 to keep, e.g. 2,3");
    scan->add_option("--jobs", scan_args.jobs, "worker threads")->check(CLI::PositiveNumber);
    scan->add_option("--out", scan_args.out, "output file (default stdout)");
    scan->add_option("--format", scan_args.format)->check(CLI::IsMember({"csv", "json"}));
    scan->add_option("--cache", scan_args.cache, "fundamental unit cache file");

    long m_max = 3, k_max = 4, d_cap = 5000;
    bool verify_json = false;
    auto* verify = app.add_subcommand("verify-theorem",
                                      "Check the n_K = 3 family against the walk");
    verify->add_option("--m-max", m_max);
    verify->add_option("--k-max", k_max);
    verify->add_option("--d-cap", d_cap);
    verify->add_flag("--json", verify_json);

    long oracle_d = 0, oracle_box = 0;
    std::string oracle_alpha, oracle_beta;
    auto* oracle = app.add_subcommand("oracle", "Brute-force minimum of Tr(a x^2)");
    oracle->add_option("d", oracle_d)->required();
    oracle->add_option("alpha", oracle_alpha, "rational p/q")->required();
    oracle->add_option("beta", oracle_beta, "rational p/q")->required();
    oracle->add_option("--box", oracle_box, "search box (default: certified)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*analyze)
            return cmd_analyze(analyze_d, analyze_json);
        if (*scan)
            return cmd_scan(scan_args);
        if (*verify)
            return cmd_verify(m_max, k_max, d_cap, verify_json);
        if (*oracle)
            return cmd_oracle(oracle_d, oracle_alpha, oracle_beta, oracle_box);
    } catch (const puf::UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const puf::DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const puf::ArithmeticError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
    return kExitUsage;
}
