#pragma once

#include "stirling/evaluator.hpp"

#include <optional>
#include <string>

namespace stirling {

enum class render_format { json, csv, text };

// One evaluation plus the inputs that produced it, ready for serialization.
// digits is the printed significant-digit count, independent of the digits
// the evaluation was carried at.
struct render_request {
    eval_breakdown breakdown;
    mpq_class modz;
    mpq_class theta_over_pi;
    long power = 1;
    long digits = 30;
    std::optional<hp_complex> reference;
};

const char* method_name(eval_method m);
eval_method method_from_name(const std::string& name);
render_format format_from_name(const std::string& name);

std::string render(const render_request& req, render_format fmt);

}  // namespace stirling
