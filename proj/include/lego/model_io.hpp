#pragma once

// CPLEX-LP and free-MPS writers and readers. Output is canonical: variables
// and rows sorted by family then indices (numeric indices compared as
// numbers), numbers in shortest round-trip form, every variable given
// explicit bounds. Emitting a parsed document reproduces it byte for byte.
//
// Integral variables whose bounds lie inside [0, 1] are read back as binary.

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lego/model.hpp"

namespace lego {

class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ModelFormat { Lp, Mps };

std::string_view file_extension(ModelFormat format);

/// Family/index-aware ordering used for canonical output.
bool canonical_less(std::string_view a, std::string_view b);

/// Throws FormatError naming the offending entity when a name is empty,
/// longer than 255 characters or uses characters outside [A-Za-z0-9_.(),].
void check_name(std::string_view name);

std::string emit_lp(const ModelInstance& model);
std::string emit_mps(const ModelInstance& model);
std::string emit(const ModelInstance& model, ModelFormat format);

ModelInstance parse_lp(std::string_view text);
ModelInstance parse_mps(std::string_view text);
ModelInstance parse(std::string_view text, ModelFormat format);

}  // namespace lego
