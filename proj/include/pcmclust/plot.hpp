#pragma once

#include <iosfwd>
#include <vector>

#include "pcmclust/diagnostics.hpp"
#include "pcmclust/kmedoids.hpp"
#include "pcmclust/mds.hpp"

namespace pcmclust {

/// Static scatter plot of the first two MDS axes; one colour per cluster,
/// medoids drawn at double size.
void write_mds_svg(std::ostream& os, const EmbeddingResult& embedding,
                   const DissimilarityMatrix& delta, const ClusteringSolution* solution);

/// Objective against k as a polyline with markers.
void write_elbow_svg(std::ostream& os, const ElbowSeries& series);

}  // namespace pcmclust
