#pragma once

// SVG figures of boxes and their image enclosures: the annulus view folds
// everything into one fundamental domain, the cover view keeps lifts apart.

#include <string>

#include "rotchaos/io.hpp"

namespace rotchaos {

enum class View { Annulus, Cover };

View view_from_string(const std::string& s);

// `input` is a certificate document or a run configuration. Configurations
// and certificates without chains draw only the boxes.
std::string render_svg(const Json& input, View view);

} // namespace rotchaos
