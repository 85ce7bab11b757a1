#pragma once

// JSON documents for DisjunctiveProblem. Layout:
//
// {
//   "name": "ex1",
//   "vars": [{"name": "x0", "lower": -4, "upper": 4}, ...],
//   "objective": {"sense": "min", "coeffs": [...], "constant": 0},
//   "globals": [{"terms": [[var, coeff], ...], "sense": "<=", "rhs": 1}],
//   "disjunctions": [{"disjuncts": [{"constraints": [
//       {"terms": [{"var": 0, "quad": 1, "center": 0, "lin": 0}],
//        "constant": 0, "rhs": 1}]}]}],
//   "indicator_rows": [{"terms": [[disjunction, disjunct, coeff]],
//                       "sense": "<=", "rhs": 1}],
//   "partition_atoms": [[[0, 4], [1, 5]], ...]
// }
//
// "name" on a var is written only when the problem carries names. Infinite
// bounds are written as the strings "inf" / "-inf".

#include <iosfwd>
#include <string>

#include "splitform/model.hpp"

namespace splitform {

std::string problem_to_json(const DisjunctiveProblem& p);
DisjunctiveProblem problem_from_json(const std::string& text);
void save_problem(const std::string& path, const DisjunctiveProblem& p);
DisjunctiveProblem load_problem(const std::string& path);

std::string sense_symbol(Sense s);
Sense parse_sense(const std::string& s);

}  // namespace splitform
