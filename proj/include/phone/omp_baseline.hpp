#pragma once

#include <Eigen/Dense>

#include "phone/channel.hpp"
#include "phone/config.hpp"
#include "phone/precoder.hpp"

namespace phone {

/// Zero-forcing digital precoder H^H (H H^H)^{-1}, columns rescaled to the
/// equal split p_max / K. Near-singular Grams get a diagonal jitter.
DigitalPrecoder zf_target(const ChannelSet& ch, const SystemConfig& cfg);

/// Greedy hybrid approximation of a target digital precoder over the
/// dictionary of the channel's true ray responses. Selects n_rf columns by
/// residual correlation, refits the baseband by least squares each round,
/// and rescales onto the power cap if exceeded. For the partial structure
/// each selected column is masked to its owning sub-array.
/// Throws if n_rays < n_rf.
HybridPrecoder omp_hybrid(const ChannelSet& ch, const DigitalPrecoder& target,
                          const SystemConfig& cfg, Structure structure);

}  // namespace phone
