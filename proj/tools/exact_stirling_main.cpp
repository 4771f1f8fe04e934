#include <CLI11.hpp>

#include "stirling/render.hpp"
#include "stirling/sector.hpp"

#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace stirling;

namespace {

mpq_class parse_rational(const std::string& text) {
    mpq_class q;
    if (q.set_str(text, 10) != 0) throw domain_error("bad rational: " + text);
    q.canonicalize();
    return q;
}

precision_policy policy_for(long digits, long limit) {
    precision_policy pol;
    pol.target_digits = digits;
    pol.series_limit = limit;
    return pol;
}

// ---------------------------------------------------------------- fixtures

struct fixture_row {
    std::string label;
    mpq_class modz = 1;
    mpq_class theta = 0;
    long power = 1;
    long N = 5;
    long limit = 10000;
    eval_method method = eval_method::borel;
    bool has_m = false;
    long m = 0;  // selects the MB entry with this signed domain index
    std::string re, im;
    long tol = -20;
    std::string skip;  // non-empty: row is reported but not evaluated
    std::string tag;
};

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (char c : line) {
        if (quoted) {
            if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ' ' || c == '\t') {
            if (!cur.empty()) {
                out.push_back(cur);
                cur.clear();
            }
        } else {
            cur += c;
        }
    }
    if (quoted) throw domain_error("unterminated quote in fixture line: " + line);
    if (!cur.empty()) out.push_back(cur);
    return out;
}

void apply_field(fixture_row& row, const std::string& key, const std::string& value) {
    if (key == "label") {
        row.label = value;
    } else if (key == "modz") {
        row.modz = parse_rational(value);
    } else if (key == "theta") {
        row.theta = parse_rational(value);
    } else if (key == "power") {
        row.power = std::stol(value);
    } else if (key == "N") {
        row.N = std::stol(value);
    } else if (key == "limit") {
        row.limit = std::stol(value);
    } else if (key == "method") {
        row.method = method_from_name(value);
    } else if (key == "m") {
        row.has_m = true;
        row.m = std::stol(value);
    } else if (key == "re") {
        row.re = value;
    } else if (key == "im") {
        row.im = value;
    } else if (key == "tol") {
        row.tol = std::stol(value);
    } else if (key == "skip") {
        row.skip = value;
    } else if (key == "tag") {
        row.tag = value;
    } else {
        throw domain_error("unknown fixture field: " + key);
    }
}

std::vector<fixture_row> load_fixture(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw domain_error("cannot open fixture file: " + path);
    std::vector<fixture_row> rows;
    fixture_row defaults;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::vector<std::string> tok = tokenize(line);
        if (tok.empty() || tok[0][0] == '#') continue;
        bool is_default = tok[0] == "default";
        bool is_row = tok[0] == "row";
        if (!is_default && !is_row) {
            throw domain_error(path + ":" + std::to_string(lineno) +
                               ": fixture lines start with 'default' or 'row'");
        }
        fixture_row row = defaults;
        for (std::size_t i = 1; i < tok.size(); ++i) {
            std::size_t eq = tok[i].find('=');
            if (eq == std::string::npos) {
                throw domain_error(path + ":" + std::to_string(lineno) +
                                   ": expected key=value, got " + tok[i]);
            }
            apply_field(row, tok[i].substr(0, eq), tok[i].substr(eq + 1));
        }
        if (is_default) {
            defaults = row;
        } else {
            if (row.label.empty()) row.label = "row " + std::to_string(rows.size() + 1);
            rows.push_back(row);
        }
    }
    return rows;
}

// ---------------------------------------------------------------- table runs

enum class row_status { pass, fail, skip, error_domain, error_convergence };

struct row_result {
    row_status status = row_status::pass;
    std::string computed_re, computed_im;
    std::string delta;
    std::string message;
};

row_result run_row(const fixture_row& row, long digits) {
    row_result res;
    if (!row.skip.empty()) {
        res.status = row_status::skip;
        res.message = row.skip;
        return res;
    }
    try {
        precision_policy pol = policy_for(digits, row.limit);
        polar_arg z(row.modz, row.theta, row.power);
        eval_breakdown b = evaluate(z, row.N, row.method, pol);
        hp_complex got = b.total;
        if (row.has_m) {
            const std::vector<mb_terms>* entries = std::get_if<std::vector<mb_terms>>(&b.terms);
            if (entries == nullptr) throw domain_error("m= fixture field needs method=mb");
            bool found = false;
            for (const mb_terms& e : *entries) {
                if (e.M == row.m) {
                    got = e.total();
                    found = true;
                    break;
                }
            }
            if (!found) throw domain_error("no MB entry with domain index " + std::to_string(row.m));
        }
        long wd = got.digits();
        res.computed_re = got.re.to_string(digits);
        res.computed_im = got.im.to_string(digits);
        hp_complex want;
        want.re = hp_real::from_string(row.re, wd);
        want.im = row.im.empty() ? hp_real(wd) : hp_real::from_string(row.im, wd);
        hp_real d = abs(got - want);
        res.delta = d.to_string(3);
        res.status = cmp(d, pow10(row.tol, wd)) <= 0 ? row_status::pass : row_status::fail;
    } catch (const non_convergence& e) {
        res.status = row_status::error_convergence;
        res.message = e.what();
    } catch (const domain_error& e) {
        res.status = row_status::error_domain;
        res.message = e.what();
    }
    return res;
}

int cmd_table(long id, const std::string& fixture_dir, long digits, bool have_limit,
              long limit, bool have_modz, const mpq_class& modz, bool have_n, long n_override) {
    std::string path = fixture_dir + "/table" + std::to_string(id) + ".txt";
    std::vector<fixture_row> rows = load_fixture(path);
    for (fixture_row& r : rows) {
        if (have_limit) r.limit = limit;
        if (have_modz) r.modz = modz;
        if (have_n) r.N = n_override;
    }

    // rows fan out concurrently; results print in row order
    std::vector<std::future<row_result>> jobs;
    jobs.reserve(rows.size());
    for (const fixture_row& r : rows) {
        jobs.push_back(std::async(std::launch::async, run_row, std::cref(r), digits));
    }

    long passed = 0, failed = 0, skipped = 0;
    int exit_code = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const fixture_row& r = rows[i];
        row_result res = jobs[i].get();
        std::cout << "row " << r.label;
        if (!r.tag.empty()) std::cout << "  [" << r.tag << "]";
        std::cout << '\n';
        switch (res.status) {
            case row_status::skip:
                ++skipped;
                std::cout << "  SKIP: " << res.message << '\n';
                break;
            case row_status::error_domain:
            case row_status::error_convergence:
                ++failed;
                std::cout << "  ERROR: " << res.message << '\n';
                exit_code = res.status == row_status::error_domain ? 2 : 3;
                break;
            default: {
                std::cout << "  computed  " << res.computed_re;
                if (!res.computed_im.empty()) std::cout << "  " << res.computed_im << " i";
                std::cout << '\n';
                std::cout << "  fixture   " << r.re;
                if (!r.im.empty()) std::cout << "  " << r.im << " i";
                std::cout << '\n';
                std::cout << "  |delta| = " << res.delta << "  (tol 1e" << r.tol << ")  "
                          << (res.status == row_status::pass ? "PASS" : "FAIL") << '\n';
                if (res.status == row_status::pass) {
                    ++passed;
                } else {
                    ++failed;
                    if (exit_code == 0) exit_code = 1;
                }
                break;
            }
        }
    }
    std::cout << "table " << id << ": " << passed << " passed, " << failed << " failed, "
              << skipped << " skipped\n";
    return exit_code;
}

// ---------------------------------------------------------------- commands

int cmd_eval(const mpq_class& modz, const mpq_class& theta, long power, long N, bool have_n,
             long limit, long digits, const std::string& method_name_str,
             const std::string& format_name, bool is_digamma) {
    eval_method method = method_from_name(method_name_str);
    render_format fmt = format_from_name(format_name);
    precision_policy pol = policy_for(digits, limit);
    polar_arg z(modz, theta, power);
    if (!have_n) {
        n_opt Nopt = n_opt_estimate(powered_modulus(z));
        N = Nopt.N;
    }

    render_request req;
    req.breakdown = is_digamma ? digamma(z, N, pol) : evaluate(z, N, method, pol);
    req.modz = modz;
    req.theta_over_pi = theta;
    req.power = power;
    req.digits = digits;
    // the oracle tracks the principal sheet, so it only applies when the
    // accumulated phase p*theta stays within (-pi, pi]
    mpq_class q = theta * power;
    if (!is_digamma && method != eval_method::reference && abs(q) <= 1) {
        req.reference = ln_gamma_reference(z, pol);
    }
    std::cout << render(req, fmt);
    if (fmt == render_format::json) std::cout << '\n';
    return 0;
}

int cmd_mellin_check(const std::string& s_re, const std::string& s_im, long digits) {
    precision_policy pol = policy_for(digits, 10000);
    long wd = pol.working();
    hp_complex s;
    s.re = hp_real::from_rational(parse_rational(s_re), wd);
    s.im = hp_real::from_rational(parse_rational(s_im), wd);
    std::pair<hp_complex, hp_complex> r = mellin_pair_check(s, pol);
    std::cout << "s    " << s.re.to_string(6);
    if (!s.im.is_zero()) std::cout << " + " << s.im.to_string(6) << " i";
    std::cout << '\n';
    std::cout << "lhs  " << r.first.re.to_string(digits);
    if (!r.first.im.is_zero()) std::cout << "  " << r.first.im.to_string(digits) << " i";
    std::cout << '\n';
    std::cout << "rhs  " << r.second.re.to_string(digits);
    if (!r.second.im.is_zero()) std::cout << "  " << r.second.im.to_string(digits) << " i";
    std::cout << '\n';
    std::cout << "|lhs - rhs| = " << abs(r.first - r.second).to_string(3) << '\n';
    return 0;
}

int cmd_stokes_step(const mpq_class& modz, const std::string& deltas_csv, long N, long digits) {
    std::vector<mpq_class> deltas;
    std::stringstream ss(deltas_csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) deltas.push_back(parse_rational(item));
    }
    if (deltas.empty()) throw domain_error("no deltas given");
    precision_policy pol = policy_for(digits, 10000);
    std::vector<stokes_step_record> recs = stokes_step_experiment(modz, deltas, N, pol);
    for (const stokes_step_record& r : recs) {
        std::cout << "delta = " << r.delta.get_str() << '\n';
        std::cout << "  sector total     " << r.sector_total.re.to_string(digits) << "  "
                  << r.sector_total.im.to_string(digits) << " i\n";
        std::cout << "  reference        " << r.reference.re.to_string(digits) << "  "
                  << r.reference.im.to_string(digits) << " i\n";
        std::cout << "  step error       " << r.step_error.to_string(3) << "  "
                  << (r.step_matches ? "PASS" : "FAIL") << '\n';
        std::cout << "  erf multiplier   " << r.smoothing_factor.to_string(10) << '\n';
        std::cout << "  smoothed error   " << r.smoothing_error.to_string(3) << '\n';
    }
    bool all = true;
    for (const stokes_step_record& r : recs) all = all && r.step_matches;
    std::cout << (all ? "step-function dispatch PASS for all deltas\n"
                      : "step-function dispatch FAILED for some delta\n");
    return all ? 0 : 1;
}

int dispatch(int argc, char** argv) {
    CLI::App app{"regularized Stirling evaluation of ln Gamma, psi and Euler's constant"};
    app.require_subcommand(1);

    long default_digits = 30;
    if (const char* env = std::getenv("EXACT_STIRLING_DIGITS")) {
        default_digits = std::atol(env);
        if (default_digits < 1) throw domain_error("bad EXACT_STIRLING_DIGITS");
    }
    std::string fixture_dir = EXACT_STIRLING_FIXTURE_DIR;

    std::string modz_str = "1", theta_str = "0/1", method_str = "automatic", format_str = "text";
    long power = 1, N = 5, limit = 10000, digits = default_digits;

    auto add_common = [&](CLI::App* c, bool with_method) {
        c->add_option("--modz", modz_str, "modulus |z| as a decimal or num/den rational");
        c->add_option("--theta", theta_str, "phase as num/den so that theta = (num/den) pi");
        c->add_option("--power", power, "exponent p; the target argument is z^p");
        c->add_option("--N", N, "truncation order (default: optimal, about pi |z^p|)");
        c->add_option("--limit", limit, "number-sum cutoff for the Borel remainder");
        c->add_option("--digits", digits, "target significant digits (env EXACT_STIRLING_DIGITS)");
        if (with_method) {
            c->add_option("--method", method_str,
                          "automatic | borel | incgamma | mb | reference");
        }
        c->add_option("--format", format_str, "text | json | csv");
    };

    CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate ln Gamma(z^p) one way");
    add_common(eval_cmd, true);

    CLI::App* dig_cmd = app.add_subcommand("digamma", "evaluate psi(z^p) by the Borel route");
    add_common(dig_cmd, false);

    long table_id = 0;
    CLI::App* table_cmd = app.add_subcommand("table", "compare a stored table against fixtures");
    table_cmd->add_option("id", table_id, "table number 1..10")->required();
    table_cmd->add_option("--fixtures", fixture_dir, "fixture directory");
    table_cmd->add_option("--limit", limit, "override every row's limit");
    table_cmd->add_option("--modz", modz_str, "override every row's modulus");
    table_cmd->add_option("--N", N, "override every row's truncation order");
    table_cmd->add_option("--digits", digits, "digits printed per row");

    std::string s_re = "1", s_im = "0";
    CLI::App* mellin_cmd =
        app.add_subcommand("mellin-check", "verify the Mellin pair behind the contour integral");
    mellin_cmd->add_option("--s", s_re, "Re s as a rational (need Re s > 1/2)");
    mellin_cmd->add_option("--s-im", s_im, "Im s as a rational");
    mellin_cmd->add_option("--digits", digits, "target significant digits");

    std::string deltas_csv = "1/100,1/1000,1/10000,1/20000";
    CLI::App* stokes_cmd = app.add_subcommand(
        "stokes-step", "probe the Stokes line theta = pi/2 against the smoothing hypothesis");
    stokes_cmd->add_option("--modz", modz_str, "modulus |z|");
    stokes_cmd->add_option("--deltas", deltas_csv, "comma list of rational offsets from 1/2");
    stokes_cmd->add_option("--N", N, "truncation order");
    stokes_cmd->add_option("--digits", digits, "target significant digits");

    N = 0;  // sentinel: 0 means "not given" for eval/digamma default
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    if (eval_cmd->parsed() || dig_cmd->parsed()) {
        CLI::App* c = eval_cmd->parsed() ? eval_cmd : dig_cmd;
        bool have_n = c->count("--N") > 0;
        if (!have_n) N = 1;
        return cmd_eval(parse_rational(modz_str), parse_rational(theta_str), power, N, have_n,
                        limit, digits, method_str, format_str, dig_cmd->parsed());
    }
    if (table_cmd->parsed()) {
        return cmd_table(table_id, fixture_dir, digits, table_cmd->count("--limit") > 0, limit,
                         table_cmd->count("--modz") > 0, parse_rational(modz_str),
                         table_cmd->count("--N") > 0, N);
    }
    if (mellin_cmd->parsed()) return cmd_mellin_check(s_re, s_im, digits);
    if (stokes_cmd->parsed()) {
        if (stokes_cmd->count("--N") == 0) N = 9;
        return cmd_stokes_step(parse_rational(modz_str), deltas_csv, N, digits);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const non_convergence& e) {
        std::cerr << "non-convergence: " << e.what() << '\n';
        return 3;
    } catch (const domain_error& e) {
        std::cerr << "domain error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
