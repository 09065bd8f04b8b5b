#pragma once

#include <string>
#include <vector>

#include "mmnet/net.hpp"

namespace mmnet {

struct FilterOptions {
  std::vector<std::string> tags{"human", "product"};
};

struct EnricherOptions {
  std::string shape = "oval";
  std::string color = "red";
};

// Reusable nets. Each reads ⟨id, a⟩ tokens from `ch_in` and writes to `ch_out`
// (the enricher reads ⟨key, id, a⟩). Builders return nets without initial state
// except for the splitter's empty `out` set.
MMNet splitter_net();
MMNet filter_net(const FilterOptions& opts = {});
MMNet enricher_net(const EnricherOptions& opts = {});
MMNet detector_net();

/// Fuses up's ch_out with down's ch_in. Names are qualified with the net name
/// unless already qualified; the result exposes `ch_in` and `ch_out`. Throws
/// ChannelTypeMismatch when the channel colors differ.
MMNet compose(const MMNet& up, const MMNet& down);

/// Puts an adapter in front of the enricher so that it reads ⟨id, a⟩ and
/// looks up segments under the predicate IRI `key`.
MMNet with_key_adapter(const MMNet& enricher, const std::string& key);

/// compose(detector, compose(filter, splitter)).
MMNet pipeline_net();

// Demo data: one image `@img1` with id "i1".

/// 100x100 canvas with `faces` regions tagged "human face" and `products`
/// regions tagged "product", all disjoint.
SyntheticImage demo_image(int faces, int products);
std::vector<Rect> demo_face_boxes(int faces);
std::vector<Rect> demo_product_boxes(int products);

/// Splitter input state: faceCount and faceSegment metadata for k faces.
StorageInstance splitter_seed(int k);
/// Filter input state: one containsObj triple per tag.
StorageInstance filter_seed(const std::vector<std::string>& tags);
/// Enricher input state: the splitter metadata for `faces` faces.
StorageInstance enricher_seed(int faces);
/// Detector and pipeline input state: the image only.
StorageInstance detector_seed(int faces, int products);

/// Pattern nets with the demo initial state, as shipped in nets/.
std::vector<std::string> pattern_names();
/// Throws Error for unknown names.
MMNet demo_net(const std::string& name);

}  // namespace mmnet
