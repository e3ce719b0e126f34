#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace poincare::testing {

struct CorpusEntry {
  const char* text;
  std::function<double(double, double)> value;
};

inline std::vector<CorpusEntry> expression_corpus() {
  using std::cos, std::cosh, std::exp, std::sin, std::sinh, std::sqrt, std::tanh;
  constexpr double pi = std::numbers::pi;
  return {
      {"1", [](double, double) { return 1.0; }},
      {"x", [](double x, double) { return x; }},
      {"y", [](double, double y) { return y; }},
      {"pi", [](double, double) { return pi; }},
      {"x*y", [](double x, double y) { return x * y; }},
      {"sin(pi*x)*sin(pi*y)", [](double x, double y) { return sin(pi * x) * sin(pi * y); }},
      {"1 + x - 2*y", [](double x, double y) { return 1 + x - 2 * y; }},
      {"1.05+1.1*x-2*y", [](double x, double y) { return 1.05 + 1.1 * x - 2 * y; }},
      {"-x*y", [](double x, double y) { return -x * y; }},
      {"-(x*y)", [](double x, double y) { return -(x * y); }},
      {"--x", [](double x, double) { return x; }},
      {"x-y-1", [](double x, double y) { return x - y - 1; }},
      {"x-(y-1)", [](double x, double y) { return x - (y - 1); }},
      {"x/y/2", [](double x, double y) { return x / y / 2; }},
      {"x/(y/2)", [](double x, double y) { return x / (y / 2); }},
      {"2*-x", [](double x, double) { return 2 * -x; }},
      {"(((x)))", [](double x, double) { return x; }},
      {"exp(-x*x-y*y)", [](double x, double y) { return exp(-x * x - y * y); }},
      {"sqrt(x*x + y*y)", [](double x, double y) { return sqrt(x * x + y * y); }},
      {"sinh(x)*cosh(y)", [](double x, double y) { return sinh(x) * cosh(y); }},
      {"tanh(3*(x-0.5))", [](double x, double) { return tanh(3 * (x - 0.5)); }},
      {"cos(2*x+y)", [](double x, double y) { return cos(2 * x + y); }},
      {"sin(3*x)*exp(y)", [](double x, double y) { return sin(3 * x) * exp(y); }},
      {"4*x*y*y", [](double x, double y) { return 4 * x * y * y; }},
      {"1e-3*x + 2.5E+2*y", [](double x, double y) { return 1e-3 * x + 2.5e2 * y; }},
      {".5*x + 3.", [](double x, double) { return 0.5 * x + 3.0; }},
      {"0.1 + 0.2", [](double, double) { return 0.1 + 0.2; }},
      {"sin(cos(tanh(x)))", [](double x, double) { return sin(cos(tanh(x))); }},
      {"  x *\n  ( y + 1 )  ", [](double x, double y) { return x * (y + 1); }},
      {"-sqrt(2)/2*pi - -1", [](double, double) { return -sqrt(2.0) / 2 * pi - -1; }},
      {"(1+x)*(1-x)/(2+y)", [](double x, double y) { return (1 + x) * (1 - x) / (2 + y); }},
  };
}

}  // namespace poincare::testing
