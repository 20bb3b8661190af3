#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "plp/ast.hpp"

namespace plp {

/// Parses the program language:
///
///   0.1::burglary.                    % ground probabilistic fact
///   0.7::hears_alarm(X) :- person(X). % intensional probabilistic fact
///   t(_)::stress(P) :- person(P).     % learnable probability
///   person(john).
///   calls(X) :- alarm, hears_alarm(X).
///   safe :- \+ alarm.
///   query(burglary).
///   evidence(calls(john),true).
///
/// Throws Error(Semantic) with "line:col" on syntax errors, on overlap between
/// probabilistic and derived predicates, on unsafe variables and on
/// probabilities outside [0,1].
Program parse_program(std::string_view text);

/// Parses a file made only of evidence(atom,true|false). directives.
PartialInterpretation parse_evidence(std::string_view text);

/// Parses a file of query(atom). directives.
std::vector<Atom> parse_queries(std::string_view text);

/// Surface syntax for a whole program; parse_program(pretty_print(p)) == p.
std::string pretty_print(const Program& program);

}  // namespace plp
