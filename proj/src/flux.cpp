#include "prarefact/flux.hpp"

#include "prarefact/error.hpp"

namespace prarefact {

FluxModel FluxModel::from_name(std::string_view name) {
  if (name == "burgers") return burgers();
  if (name == "quartic") return quartic();
  throw DomainError("unknown flux '" + std::string(name) + "' (expected burgers or quartic)");
}

std::string FluxModel::name() const { return kind_ == Kind::burgers ? "burgers" : "quartic"; }

}  // namespace prarefact
