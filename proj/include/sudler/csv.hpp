#pragma once

// CSV emission. Floats are written as the shortest decimal that round-trips,
// so output depends only on the computed doubles.

#include <ostream>
#include <string>
#include <vector>

#include "sudler/birkhoff.hpp"
#include "sudler/bounds.hpp"
#include "sudler/product.hpp"

namespace sudler::csv {

std::string shortest(double v);

void write_profile(std::ostream& out, const std::vector<ProfileRow>& rows);            // k,P,logP
void write_cot_profile(std::ostream& out, const std::vector<CotProfileRow>& rows);     // k,partial
void write_power_law(std::ostream& out, const std::vector<PowerLawRow>& rows);         // k,logP_over_logk

}  // namespace sudler::csv
