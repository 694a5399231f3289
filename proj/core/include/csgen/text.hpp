#pragma once

#include <span>
#include <string>
#include <string_view>
#include <utility>

namespace csgen {

/// Replaces {name}-style placeholders in a single left-to-right pass, so
/// substituted values are never re-scanned. Slot keys include the braces.
/// Unknown placeholders are left verbatim.
std::string render_template(std::string_view tmpl,
                            std::span<const std::pair<std::string_view, std::string_view>> slots);

/// Cleans up a model reply: strips surrounding whitespace, then peels
/// surrounding quote pairs (ASCII and typographic) as long as both ends are
/// quoted. A lone trailing apostrophe is left alone.
std::string trim_generated(std::string_view text);

}  // namespace csgen
