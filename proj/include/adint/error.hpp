#pragma once

#include <stdexcept>
#include <string>

namespace adint {

// Base for every error the solvers raise. Callers that only care about
// "something went wrong with this instance" catch this one.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The graph contains a directed cycle but the operation needs a DAG.
class CyclicGraph : public Error {
 public:
  CyclicGraph() : Error("CyclicGraph: graph contains a directed cycle") {}
  explicit CyclicGraph(const std::string& what) : Error("CyclicGraph: " + what) {}
};

// An enumeration guard was exceeded.
class TooLarge : public Error {
 public:
  explicit TooLarge(const std::string& what) : Error("TooLarge: " + what) {}
};

// Generator constraints cannot be met.
class Infeasible : public Error {
 public:
  explicit Infeasible(const std::string& what) : Error("Infeasible: " + what) {}
};

// Some node has two or more live out-edges where a tree was required.
class NotATree : public Error {
 public:
  explicit NotATree(const std::string& what) : Error("NotATree: " + what) {}
};

// Graph or block set violates a structural invariant.
class InvalidInput : public Error {
 public:
  explicit InvalidInput(const std::string& what) : Error("InvalidInput: " + what) {}
};

}  // namespace adint
