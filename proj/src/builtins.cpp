#include "openbook/workbench.hpp"

namespace openbook {

namespace {

struct Builtin {
  const char* name;
  const char* description;
  const char* text;
};

const Builtin kBuiltins[] = {
    {"milnor-local",
     "isolated singularity probed on shrinking spheres; the normalized "
     "critical set accumulates at the origin",
     R"json({
  "name": "milnor-local",
  "description": "isolated singularity probed on shrinking spheres",
  "variables": ["x", "y", "z"],
  "map": ["x", "x^2 + y*(x^2+y^2) + z^2"],
  "world": {"type": "sphere", "radii": ["1/5", "1/10", "1/20", "1/40"], "mode": "local"},
  "tasks": ["identities", "conditions"],
  "seed": 42,
  "n_starts": 200
})json"},
    {"milnor-global",
     "the same map on growing spheres, where the obstruction disappears",
     R"json({
  "name": "milnor-global",
  "description": "the same map on growing spheres, fibration expected",
  "variables": ["x", "y", "z"],
  "map": ["x", "x^2 + y*(x^2+y^2) + z^2"],
  "world": {"type": "sphere", "radii": [2, 4, 8, 16], "mode": "global"},
  "tasks": ["identities", "conditions"],
  "seed": 42,
  "n_starts": 200
})json"},
    {"polar-mixed",
     "real form of a mixed polynomial pair with singular zero set; chi audit "
     "with declared smooth pieces",
     R"json({
  "name": "polar-mixed",
  "description": "real mixed-form pair with singular zero set, chi audit",
  "variables": ["a", "b", "c", "d"],
  "map": ["(a^2+b^2)*(a+c)", "(a^2+b^2)*(b+d)"],
  "world": {"type": "sphere", "radii": [2, 4, 8], "mode": "global"},
  "tasks": ["identities", "euler", "consistency"],
  "seed": 42,
  "n_starts": 250,
  "euler": {
    "radius": 4,
    "links": [
      {"indices": [1], "pieces": [["a", "b"], ["a + c"]]},
      {"indices": [2], "pieces": [["a", "b"], ["b + d"]]},
      {"indices": [1, 2], "pieces": [["a", "b"], ["a + c", "b + d"]]}
    ],
    "fiber": {"component": 1, "delta": "1/10"}
  },
  "claims": {"fiber": 1, "link[1]": 2}
})json"},
    {"smooth-global",
     "globally nonsingular pair on large spheres; fibration with full chi table",
     R"json({
  "name": "smooth-global",
  "description": "globally nonsingular pair, fibration with full chi table",
  "variables": ["x", "y", "z"],
  "map": ["x^2 + y", "x + z"],
  "world": {"type": "sphere", "radii": [5, 10, 20], "mode": "global"},
  "tasks": ["identities", "conditions", "euler", "consistency"],
  "seed": 42,
  "n_starts": 200,
  "euler": {
    "radius": 10,
    "links": [
      {"indices": [1]},
      {"indices": [2]},
      {"indices": [1, 2]}
    ],
    "fiber": {"component": 1, "delta": "1/10"}
  },
  "claims": {"fiber": 1, "link[2]": 0}
})json"},
    {"toy-xy-sphere",
     "coordinate projection on the sphere; every number checkable by hand",
     R"json({
  "name": "toy-xy-sphere",
  "description": "coordinate projection on the sphere, fully hand-checkable",
  "variables": ["x", "y", "z"],
  "map": ["x", "y"],
  "world": {"type": "sphere", "radii": [1, 2, 4], "mode": "global"},
  "tasks": ["identities", "conditions", "euler", "consistency"],
  "seed": 42,
  "n_starts": 150,
  "euler": {
    "radius": 1,
    "links": [
      {"indices": [1]},
      {"indices": [2]},
      {"indices": [1, 2]}
    ],
    "fiber": {"component": 1, "delta": "1/10"}
  }
})json"},
};

} // namespace

std::vector<std::pair<std::string, std::string>> list_builtins() {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& b : kBuiltins) out.emplace_back(b.name, b.description);
  return out;
}

Scenario load_builtin(const std::string& name) {
  for (const auto& b : kBuiltins)
    if (name == b.name) return parse_scenario_json(b.text);
  throw PolyError("unknown builtin scenario '" + name + "'");
}

} // namespace openbook
