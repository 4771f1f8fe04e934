#include "stirling/render.hpp"

#include <json.hpp>

#include <sstream>

namespace stirling {
namespace {

using nlohmann::ordered_json;

std::string real_str(const hp_real& x, long sig) { return x.to_string(sig); }

ordered_json complex_obj(const hp_complex& v, long sig) {
    return ordered_json{{"re", real_str(v.re, sig)}, {"im", real_str(v.im, sig)}};
}

long checked_long(const mpz_class& n) {
    if (!n.fits_slong_p()) throw domain_error("rational component too large to serialize");
    return n.get_si();
}

// terms slot contents in schema order F, TS, remainder, SD.  The MB engine's
// contour integral and S_MB occupy the remainder and SD slots.
struct term_slots {
    bool present = false;
    hp_complex F, TS, remainder, SD;
};

term_slots slots_of(const eval_breakdown& b) {
    term_slots s;
    if (const borel_terms* t = std::get_if<borel_terms>(&b.terms)) {
        s.present = true;
        s.F = t->F;
        s.TS = t->TS;
        s.remainder = t->remainder;
        s.SD = t->SD;
    } else if (const std::vector<mb_terms>* v = std::get_if<std::vector<mb_terms>>(&b.terms)) {
        if (!v->empty()) {
            s.present = true;
            s.F = v->front().F;
            s.TS = v->front().TS;
            s.remainder = v->front().mb_integral;
            s.SD = v->front().s_mb;
        }
    }
    return s;
}

// totals[0] is the adopted value; later entries are the raw one-sided
// determinations whenever the engine produced more than one.
std::vector<hp_complex> total_list(const eval_breakdown& b) {
    std::vector<hp_complex> out;
    out.push_back(b.total);
    if (b.totals.size() > 1) out.insert(out.end(), b.totals.begin(), b.totals.end());
    return out;
}

std::string render_json(const render_request& req, long sig) {
    const eval_breakdown& b = req.breakdown;
    ordered_json j;
    j["method"] = method_name(b.method);
    j["modz"] = req.modz.get_str();
    j["theta"] = ordered_json{{"num", checked_long(req.theta_over_pi.get_num())},
                              {"den", checked_long(req.theta_over_pi.get_den())}};
    j["power"] = req.power;
    j["N"] = b.N;
    j["limit"] = b.limit;
    j["digits"] = req.digits;
    term_slots s = slots_of(b);
    if (s.present) {
        j["terms"] = ordered_json{{"F", complex_obj(s.F, sig)},
                                  {"TS", complex_obj(s.TS, sig)},
                                  {"remainder", complex_obj(s.remainder, sig)},
                                  {"SD", complex_obj(s.SD, sig)}};
    } else {
        j["terms"] = nullptr;
    }
    ordered_json totals = ordered_json::array();
    for (const hp_complex& t : total_list(b)) totals.push_back(complex_obj(t, sig));
    j["totals"] = totals;
    j["tail_bound"] = real_str(b.tail_bound, 3);
    if (req.reference) {
        j["reference"] = complex_obj(*req.reference, sig);
    } else {
        j["reference"] = nullptr;
    }
    return j.dump(2);
}

void csv_cell(std::ostream& os, const std::string& v, bool first = false) {
    if (!first) os << ',';
    os << v;
}

std::string render_csv(const render_request& req, long sig) {
    const eval_breakdown& b = req.breakdown;
    std::ostringstream os;
    os << "method,modz,theta_num,theta_den,power,N,limit,digits,"
          "F_re,F_im,TS_re,TS_im,remainder_re,remainder_im,SD_re,SD_im,"
          "total_re,total_im,raw_total_1_re,raw_total_1_im,raw_total_2_re,raw_total_2_im,"
          "tail_bound,reference_re,reference_im\n";
    csv_cell(os, method_name(b.method), true);
    csv_cell(os, req.modz.get_str());
    csv_cell(os, req.theta_over_pi.get_num().get_str());
    csv_cell(os, req.theta_over_pi.get_den().get_str());
    csv_cell(os, std::to_string(req.power));
    csv_cell(os, std::to_string(b.N));
    csv_cell(os, std::to_string(b.limit));
    csv_cell(os, std::to_string(req.digits));
    term_slots s = slots_of(b);
    const hp_complex* parts[4] = {&s.F, &s.TS, &s.remainder, &s.SD};
    for (const hp_complex* p : parts) {
        csv_cell(os, s.present ? real_str(p->re, sig) : "");
        csv_cell(os, s.present ? real_str(p->im, sig) : "");
    }
    std::vector<hp_complex> totals = total_list(b);
    for (std::size_t k = 0; k < 3; ++k) {
        bool have = k < totals.size();
        csv_cell(os, have ? real_str(totals[k].re, sig) : "");
        csv_cell(os, have ? real_str(totals[k].im, sig) : "");
    }
    csv_cell(os, real_str(b.tail_bound, 3));
    csv_cell(os, req.reference ? real_str(req.reference->re, sig) : "");
    csv_cell(os, req.reference ? real_str(req.reference->im, sig) : "");
    os << '\n';
    return os.str();
}

void text_line(std::ostream& os, const char* label, const hp_complex& v, long sig) {
    os << label << real_str(v.re, sig);
    if (!v.im.is_zero()) os << "  " << (v.im.sign() < 0 ? "" : "+") << real_str(v.im, sig) << " i";
    os << '\n';
}

std::string render_text(const render_request& req, long sig) {
    const eval_breakdown& b = req.breakdown;
    std::ostringstream os;
    os << "method      " << method_name(b.method) << '\n';
    os << "argument    |z| = " << req.modz.get_str() << ", theta = ("
       << req.theta_over_pi.get_str() << ") pi, power = " << req.power << '\n';
    os << "N           " << b.N << '\n';
    os << "limit       " << b.limit << '\n';
    os << "digits      " << req.digits << " (carried " << b.precision_used << ")\n";
    term_slots s = slots_of(b);
    if (s.present) {
        bool mb = std::holds_alternative<std::vector<mb_terms>>(b.terms);
        text_line(os, "F           ", s.F, sig);
        text_line(os, "TS          ", s.TS, sig);
        text_line(os, mb ? "MB integral " : "remainder   ", s.remainder, sig);
        text_line(os, mb ? "S_MB        " : "SD          ", s.SD, sig);
    }
    std::vector<hp_complex> totals = total_list(b);
    text_line(os, "total       ", totals[0], sig);
    for (std::size_t k = 1; k < totals.size(); ++k) {
        text_line(os, "  raw total ", totals[k], sig);
    }
    os << "tail bound  " << real_str(b.tail_bound, 3) << '\n';
    if (req.reference) {
        text_line(os, "reference   ", *req.reference, sig);
        hp_complex d = totals[0] - *req.reference;
        os << "|delta|     " << real_str(abs(d), 3) << '\n';
    }
    return os.str();
}

}  // namespace

const char* method_name(eval_method m) {
    switch (m) {
        case eval_method::automatic: return "automatic";
        case eval_method::borel: return "borel";
        case eval_method::incgamma: return "incgamma";
        case eval_method::mb: return "mb";
        case eval_method::reference: return "reference";
    }
    throw domain_error("unknown evaluation method");
}

eval_method method_from_name(const std::string& name) {
    if (name == "automatic") return eval_method::automatic;
    if (name == "borel") return eval_method::borel;
    if (name == "incgamma") return eval_method::incgamma;
    if (name == "mb") return eval_method::mb;
    if (name == "reference") return eval_method::reference;
    throw domain_error("unknown method name: " + name);
}

render_format format_from_name(const std::string& name) {
    if (name == "json") return render_format::json;
    if (name == "csv") return render_format::csv;
    if (name == "text") return render_format::text;
    throw domain_error("unknown output format: " + name);
}

std::string render(const render_request& req, render_format fmt) {
    long sig = req.digits < 1 ? 1 : req.digits;
    switch (fmt) {
        case render_format::json: return render_json(req, sig);
        case render_format::csv: return render_csv(req, sig);
        case render_format::text: return render_text(req, sig);
    }
    throw domain_error("unknown output format");
}

}  // namespace stirling
