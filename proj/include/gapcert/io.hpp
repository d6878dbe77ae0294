#pragma once

#include <string>

#include <json.hpp>

#include "gapcert/basis.hpp"
#include "gapcert/bounds.hpp"
#include "gapcert/eigensolver.hpp"
#include "gapcert/hamiltonian.hpp"
#include "gapcert/special_states.hpp"

namespace gapcert::io {

using json = nlohmann::json;

/// {"levels": [[value, degeneracy], ...]} where value is a number or a "p/q" string.
/// Exact levels are written back as "p/q", others as numbers.
AdditiveObservable observable_from_json(const json& j);
json observable_to_json(const AdditiveObservable& obs);

/// {"n_sites", "d", "terms": [{"support": [...], "block": [[re, im], ...]}]}, block row-major.
LocalHamiltonian hamiltonian_from_json(const json& j);
json hamiltonian_to_json(const LocalHamiltonian& h);

json certificate_to_json(const GapCertificate& c);
GapCertificate certificate_from_json(const json& j);

/// Energies, flags and solver settings; vectors are omitted.
json spectral_pair_to_json(const SpectralPair& p);

/// {"n": int, "coefficients": [number | [re, im], ...], "sign": "+" | "-"}.
DickeSuperpositionSpec dicke_spec_from_json(const json& j);
json dicke_spec_to_json(const DickeSuperpositionSpec& spec);

json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

} // namespace gapcert::io
