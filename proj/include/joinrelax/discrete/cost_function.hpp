#pragma once

#include <cstddef>
#include <string>

#include "joinrelax/costmodel/model.hpp"
#include "joinrelax/plan/plan.hpp"
#include "joinrelax/storage/cardinality.hpp"

namespace joinrelax::discrete {

// Plan -> nonnegative cost, counting evaluations. Partial plans over a subset of the
// query's patterns are costed as complete plans over that subset.
class CostFunction {
 public:
  virtual ~CostFunction() = default;

  double operator()(const Plan& plan) {
    ++evaluations_;
    return evaluate(plan);
  }

  std::size_t evaluations() const { return evaluations_; }
  void reset() { evaluations_ = 0; }

  virtual bool exact() const = 0;
  virtual std::string name() const = 0;

 protected:
  virtual double evaluate(const Plan& plan) = 0;

 private:
  std::size_t evaluations_ = 0;
};

// True C_out from the triple store.
class ExactCost final : public CostFunction {
 public:
  explicit ExactCost(CardinalityOracle& oracle) : oracle_(&oracle) {}
  bool exact() const override { return true; }
  std::string name() const override { return "exact"; }

 protected:
  double evaluate(const Plan& plan) override;

 private:
  CardinalityOracle* oracle_;
};

// Model prediction in C_out units.
class LearnedCost final : public CostFunction {
 public:
  LearnedCost(const costmodel::ModelParams& model, tensor::Matrix pattern_rows)
      : model_(&model), pattern_rows_(std::move(pattern_rows)) {}
  bool exact() const override { return false; }
  std::string name() const override { return "learned"; }

  // Raw network output for the plan, without counting an evaluation.
  double output(const Plan& plan) const;

 protected:
  double evaluate(const Plan& plan) override;

 private:
  const costmodel::ModelParams* model_;
  tensor::Matrix pattern_rows_;
};

}  // namespace joinrelax::discrete
