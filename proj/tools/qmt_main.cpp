// qmt: evaluate generalized / complete mock theta functions at high precision
// and verify the identity catalog numerically, reporting residuals.
//
// Exit codes: 0 success, 1 established-identity failure, 2 configuration or
// usage error, 3 I/O error.

#include <iostream>

#include "CLI11.hpp"

#include "qmt/harness.hpp"

namespace {

struct EvalOptions {
    std::string function;
    std::string variant = "classical";
    std::string q, z = "0", t = "0", alpha = "0", c1 = "0.1", c2 = "0.2";
    std::string psi3_denominator = "printed";
    unsigned precision = 50;
    std::size_t max_terms = 500;
    std::string tail_tol = "1e-40";
};

int run_eval(const EvalOptions& opt) {
    qmt::set_precision(opt.precision);
    qmt::ParameterPoint p;
    p.q = qmt::parse_complex(opt.q);
    p.z = qmt::parse_complex(opt.z);
    p.t = qmt::parse_complex(opt.t);
    p.alpha = qmt::Real(opt.alpha);
    p.c1 = qmt::parse_complex(opt.c1);
    p.c2 = qmt::parse_complex(opt.c2);
    qmt::FunctionId f{qmt::family_from_name(opt.function),
                      qmt::variant_from_name(opt.variant)};
    qmt::Psi3Denominator psi3;
    if (opt.psi3_denominator == "printed")
        psi3 = qmt::Psi3Denominator::AsPrinted;
    else if (opt.psi3_denominator == "negated")
        psi3 = qmt::Psi3Denominator::NegatedBase;
    else
        throw qmt::UsageError("--psi3-denominator must be 'printed' or 'negated'");
    qmt::TruncationPolicy pol{opt.max_terms, qmt::Real(opt.tail_tol), 3};
    std::cout << qmt::eval_record_line(f, p, pol, psi3) << "\n";
    return 0;
}

int run_verify(const qmt::SuiteConfig& config) {
    qmt::RunOutcome outcome = qmt::run_suite(config);
    qmt::write_text_file(config.out_path, outcome.report_text);
    std::size_t pass = 0, fail = 0, report = 0, singular = 0;
    for (const qmt::ResidualRecord& rec : outcome.records) {
        switch (rec.verdict) {
        case qmt::Verdict::Pass:     ++pass; break;
        case qmt::Verdict::Fail:     ++fail; break;
        case qmt::Verdict::Report:   ++report; break;
        case qmt::Verdict::Singular: ++singular; break;
        }
    }
    std::cout << "records=" << outcome.records.size() << " pass=" << pass << " fail=" << fail
              << " report=" << report << " singular=" << singular
              << " rejections=" << outcome.rejections.size() << " out=" << config.out_path
              << "\n";
    return outcome.established_failure ? 1 : 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"high-precision evaluation and verification of generalized and complete "
                 "mock theta function identities"};
    app.require_subcommand(1);

    EvalOptions eopt;
    CLI::App* eval = app.add_subcommand("eval", "evaluate one function at one point");
    eval->add_option("--function", eopt.function, "psi0, psi1, psi2, psi3, phi0, phi1")
        ->required();
    eval->add_option("--variant", eopt.variant, "classical, generalized, complete");
    eval->add_option("--q", eopt.q, "nome q (0 < |q| < 1)")->required();
    eval->add_option("--z", eopt.z, "argument z");
    eval->add_option("--t", eopt.t, "parameter t");
    eval->add_option("--alpha", eopt.alpha, "exponent shift alpha");
    eval->add_option("--c1", eopt.c1, "auxiliary parameter c1");
    eval->add_option("--c2", eopt.c2, "auxiliary parameter c2");
    eval->add_option("--psi3-denominator", eopt.psi3_denominator,
                     "classical psi3 denominator: printed ((q;q)_2n) or negated ((-q;q)_2n)");
    eval->add_option("--precision", eopt.precision, "decimal digits (>= 30)");
    eval->add_option("--max-terms", eopt.max_terms, "series term cap");
    eval->add_option("--tail-tol", eopt.tail_tol, "series tail tolerance");

    qmt::SuiteConfig config;
    std::string points_file;
    CLI::App* verify = app.add_subcommand("verify", "run the identity residual suite");
    verify->set_config("--config", "", "flat key=value config file; command line wins");
    verify->add_option("--identity", config.identities, "identity id (repeatable)");
    verify->add_option("--points", points_file, "point file (one point per line)");
    verify->add_option("--count", config.sampler.count, "number of sampled points");
    verify->add_option("--seed", config.sampler.seed, "sampler seed");
    verify->add_option("--precision", config.precision, "decimal digits (>= 30)");
    verify->add_option("--max-terms", config.max_terms, "series term cap");
    verify->add_option("--tail-tol", config.tail_tol, "series tail tolerance");
    verify->add_option("--assert-tol", config.assert_tol,
                       "pass/fail tolerance for established identities");
    verify->add_option("--out", config.out_path, "report path (JSON lines)");
    verify->add_option("--threads", config.threads, "worker threads");

    CLI::App* list = app.add_subcommand("list-identities", "print the identity catalog");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (list->parsed()) {
            std::cout << qmt::list_identities_text();
            return 0;
        }
        if (eval->parsed())
            return run_eval(eopt);
        if (!points_file.empty())
            config.points_file = points_file;
        return run_verify(config);
    } catch (const qmt::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 3;
    } catch (const qmt::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const qmt::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const qmt::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
