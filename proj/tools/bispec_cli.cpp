#include <fstream>
#include <functional>
#include <future>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "bispec/cli/commands.hpp"

using namespace bispec;
using namespace bispec::cli;

namespace {

Json read_document(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        fail(ErrorCode::InvalidArgument, "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error &) {
        // a bare operator expression
        return Json(text);
    }
}

RunResult guarded(const std::function<RunResult()> &f)
{
    try {
        return f();
    } catch (const Error &e) {
        return {Failed, error_json(e)};
    } catch (const nlohmann::json::exception &e) {
        return {Failed, error_json(Error(ErrorCode::InvalidArgument, e.what()))};
    }
}

// Independent input files run concurrently; the output keeps input order.
RunResult over_files(const std::vector<std::string> &files, const std::function<RunResult(const Json &)> &f)
{
    std::vector<std::future<RunResult>> jobs;
    for (const auto &path : files)
        jobs.push_back(std::async(std::launch::async, [&f, path] { return guarded([&] { return f(read_document(path)); }); }));
    if (jobs.size() == 1)
        return jobs.front().get();
    RunResult all;
    all.doc = Json::array();
    for (auto &j : jobs) {
        RunResult r = j.get();
        all.code = std::max(all.code, r.code);
        all.doc.push_back(std::move(r.doc));
    }
    return all;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Exact construction, verification and classification of bispectral operators"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string field, generator = "a", output;
    app.add_option("--field", field, "minimal polynomial of the extension generator, e.g. \"a^2 - 2\"");
    app.add_option("--generator", generator, "name of the extension generator");
    app.add_option("-o,--output", output, "write the JSON document here instead of stdout");

    RunResult result;
    auto session = [&] {
        Session s;
        s.generator = generator;
        if (!field.empty())
            s.field = field_extend(parse_minpoly(field, generator), generator);
        return s;
    };

    BesselOptions bo;
    auto *bessel = app.add_subcommand("bessel", "Bessel operator, string law and rank");
    bessel->add_option("--beta", bo.beta, "comma-separated exponents")->required()->allow_extra_args(false);
    bessel->add_flag("--normalize", bo.normalize, "shift beta to sum N(N-1)/2");
    bessel->add_option("--rank-bound", bo.rank_bound, "largest commuting order tried")->capture_default_str();
    bessel->callback([&] { result = guarded([&] { return run_bessel(bo, session()); }); });

    DarbouxOptions dopt;
    auto *darboux = app.add_subcommand("darboux", "Darboux transformation from a kernel basis");
    darboux->add_option("--base", dopt.base, "Bessel exponents of the base operator")->required();
    darboux->add_option("--power", dopt.power, "power d of the base operator")->capture_default_str();
    darboux->add_option("--kernel", dopt.kernel, "kernel functions (sums of c*x^g*ln^j; ';' separates functions)")->required();
    darboux->add_option("--prec", dopt.prec, "series precision for root extraction")->capture_default_str();
    darboux->callback([&] { result = guarded([&] { return run_darboux(dopt, session()); }); });

    std::vector<std::string> files;
    VerifyOptions vo;
    auto *verify = app.add_subcommand("verify", "bispectral certificate (L, Lambda, f, theta)");
    verify->add_option("--op", files, "operator documents")->required()->check(CLI::ExistingFile);
    verify->add_option("--theta-deg", vo.theta_deg)->capture_default_str();
    verify->add_option("--max-m", vo.max_m)->capture_default_str();
    verify->add_option("--prec", vo.prec)->capture_default_str();
    verify->add_option("--depth", vo.depth)->capture_default_str();
    verify->callback([&] { result = over_files(files, [&](const Json &d) { return run_verify(d, vo); }); });

    StringOptions so;
    auto *string = app.add_subcommand("string", "string pair [L, Q] = N L^(n+1)");
    string->add_option("--op", files, "operator documents")->required()->check(CLI::ExistingFile);
    string->add_option("--prec", so.prec)->capture_default_str();
    string->add_option("--depth", so.depth)->capture_default_str();
    string->add_option("--identities", so.identities, "check (ad L)^i Q^i up to this i")->capture_default_str();
    string->callback([&] { result = over_files(files, [&](const Json &d) { return run_string(d, so); }); });

    ClassifyOptions co;
    auto *classify = app.add_subcommand("classify", "reduction to a Bessel operator");
    classify->add_option("--op", files, "operator documents")->required()->check(CLI::ExistingFile);
    classify->add_option("--prec", co.prec)->capture_default_str();
    classify->add_option("--depth", co.depth)->capture_default_str();
    classify->add_option("--max-steps", co.max_steps);
    classify->callback([&] { result = over_files(files, [&](const Json &d) { return run_classify(d, co); }); });

    CharacterizationBounds cb;
    auto *report = app.add_subcommand("report", "verdicts of the three equivalent conditions");
    report->add_option("--op", files, "operator documents")->required()->check(CLI::ExistingFile);
    report->add_option("--theta-deg", cb.theta_deg)->capture_default_str();
    report->add_option("--max-m", cb.theta_m)->capture_default_str();
    report->add_option("--prec", cb.prec)->capture_default_str();
    report->add_option("--depth", cb.depth)->capture_default_str();
    report->add_option("--max-steps", cb.max_steps);
    report->callback([&] { result = over_files(files, [&](const Json &d) { return run_report(d, cb); }); });

    WaveOptions wo;
    auto *wave = app.add_subcommand("wave", "wave operator K with L K = K d^N");
    wave->add_option("--op", files, "operator documents")->required()->check(CLI::ExistingFile);
    wave->add_option("--prec", wo.prec)->capture_default_str();
    wave->add_option("--depth", wo.depth)->capture_default_str();
    wave->callback([&] { result = over_files(files, [&](const Json &d) { return run_wave(d, wo); }); });

    CLI11_PARSE(app, argc, argv);

    const std::string text = result.doc.dump(2) + "\n";
    if (output.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(output);
        if (!out) {
            std::cerr << "cannot write " << output << "\n";
            return Failed;
        }
        out << text;
    }
    if (result.code != Verified && result.doc.contains("code"))
        std::cerr << result.doc["code"].get<std::string>() << "\n";
    return result.code;
}
