#pragma once

#include <string>

#include "chainmail/presentation.hpp"
#include "chainmail/slope.hpp"

namespace chainmail {

// Quotient by meridian^p * longitude^q of the named peripheral component.
// The component leaves the peripheral list; a FilledRecord keeps enough to
// undo the operation exactly (see unfill).
Presentation dehn_fill(const Presentation& p, const std::string& component_id, Slope s);

// Undo the most recent fill of the named component: drop the filling relator
// and restore the peripheral entry at its recorded position.
Presentation unfill(const Presentation& p, const std::string& component_id);

// Glue p1 and p2 along the named components: free product with the two
// meridians and the two longitudes identified.  Generators and component ids
// are prefixed "1:" / "2:" to keep the factors apart; the glued components
// disappear from the peripheral list.  p1 and p2 must be distinct objects.
Presentation splice(const Presentation& p1, const std::string& c1, const Presentation& p2,
                    const std::string& c2);

} // namespace chainmail
