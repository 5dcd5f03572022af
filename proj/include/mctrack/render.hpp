#pragma once

#include <filesystem>
#include <optional>

#include "mctrack/appearance.hpp"
#include "mctrack/obs_mask.hpp"
#include "mctrack/templates.hpp"

namespace mct {

/// Frame with the tracked box (red) and, if given, the ground truth (green).
void write_overlay(const std::filesystem::path& file, const GrayImage& frame, const Box& tracked,
                   std::optional<Box> truth = {});

/// Target patch magnified, with unobserved pixels shaded blue.
void write_mask_view(const std::filesystem::path& file, const AppearanceVector& target, const ObservationMask& omega,
                     int patch_w, int patch_h);

/// Templates side by side, one tile per column of T.
void write_template_montage(const std::filesystem::path& file, const TemplateSet& ts, int patch_w, int patch_h);

}  // namespace mct
