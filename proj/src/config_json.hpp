#pragma once

#include <initializer_list>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "rustseg/config.hpp"
#include "rustseg/error.hpp"

namespace rustseg::detail {

using Json = nlohmann::ordered_json;

Json config_to_object(const PipelineConfig& config);

/// Reads every config key present in `obj`, starting from `base`. Keys listed
/// in `extra_keys` are skipped; any other unknown key is an issue.
PipelineConfig config_from_object(const Json& obj, PipelineConfig base,
                                  std::initializer_list<std::string_view> extra_keys = {});

Json range_to_object(const HsvRange& r);
Json cluster_to_object(const ClusterInfo& c);

}  // namespace rustseg::detail
