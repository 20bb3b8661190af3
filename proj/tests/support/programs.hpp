#pragma once

#include <string>

namespace plp::testing {

inline const std::string kAlarm = R"(
0.1::burglary.                    person(mary).
0.2::earthquake.                  person(john).
0.7::hears_alarm(X) :- person(X).
alarm :- burglary.
alarm :- earthquake.
calls(X) :- alarm, hears_alarm(X).
)";

inline const std::string kAlarmLearnable = R"(
t(_)::burglary.                   person(mary).
t(_)::earthquake.                 person(john).
t(_)::hears_alarm(X) :- person(X).
alarm :- burglary.
alarm :- earthquake.
calls(X) :- alarm, hears_alarm(X).
)";

inline const std::string kSmokersFriends = R"(
0.2::stress(P) :- person(P).
0.3::influences(P1,P2) :- friend(P1,P2).
person(p1). person(p2). person(p3).
friend(p1,p2). friend(p1,p3).
friend(p2,p1). friend(p3,p1).
smokes(X) :- stress(X).
smokes(X) :- smokes(Y), influences(Y,X).
)";

// Three persons, everybody befriends everybody else.
inline std::string smokers(bool learnable) {
  std::string stress = learnable ? "t(_)" : "0.2";
  std::string infl = learnable ? "t(_)" : "0.3";
  std::string spont = learnable ? "t(_)" : "0.1";
  std::string smoke = learnable ? "t(_)" : "0.3";
  return stress + "::stress(P) :- person(P).\n" +
         infl + "::influences(P1,P2) :- friend(P1,P2).\n" +
         spont + "::cancer_spont(P) :- person(P).\n" +
         smoke + "::cancer_smoke(P) :- person(P).\n" +
         R"(person(p1). person(p2). person(p3).
friend(p1,p2). friend(p1,p3). friend(p2,p1).
friend(p2,p3). friend(p3,p1). friend(p3,p2).
smokes(X) :- stress(X).
smokes(X) :- smokes(Y), influences(Y,X).
cancer(P) :- cancer_spont(P).
cancer(P) :- smokes(P), cancer_smoke(P).
)";
}

// 3x3 grid, nodes n11..n33, edges right, down and diagonally down-right.
inline std::string grid3() {
  std::string out;
  for (int r = 1; r <= 3; ++r) {
    for (int c = 1; c <= 3; ++c) {
      auto node = [](int i, int j) { return "n" + std::to_string(i) + std::to_string(j); };
      if (c < 3) out += "0.5::edge(" + node(r, c) + "," + node(r, c + 1) + ").\n";
      if (r < 3) out += "0.5::edge(" + node(r, c) + "," + node(r + 1, c) + ").\n";
      if (r < 3 && c < 3) out += "0.5::edge(" + node(r, c) + "," + node(r + 1, c + 1) + ").\n";
    }
  }
  out += "path(X,Y) :- edge(X,Y).\n";
  out += "path(X,Y) :- edge(X,Z), path(Z,Y).\n";
  return out;
}

}  // namespace plp::testing
