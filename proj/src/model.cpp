#include "ggnlab/model.hpp"

namespace ggnlab {

QueueModel::QueueModel(DistributionSpec arrival, std::vector<DistributionSpec> services,
                       Mode mode, Routing routing)
    : arrival_(std::move(arrival)),
      services_(std::move(services)),
      mode_(mode),
      routing_(routing) {
    if (services_.empty()) throw Error("QueueModel: need at least one server");
    arrival_rate_ = 1.0 / moments(arrival_).mean;
    service_rates_.reserve(services_.size());
    for (const auto& s : services_) {
        service_rates_.push_back(1.0 / moments(s).mean);
        total_rate_ += service_rates_.back();
    }
    for (size_t i = 1; i < services_.size(); i++) {
        if (describe(services_[i]) != describe(services_[0])) {
            homogeneous_ = false;
            break;
        }
    }
}

QueueModel QueueModel::homogeneous(DistributionSpec arrival, DistributionSpec service,
                                   int n, Mode mode, Routing routing) {
    if (n < 1) throw Error("QueueModel: need n >= 1");
    std::vector<DistributionSpec> services(static_cast<size_t>(n), service);
    return QueueModel(std::move(arrival), std::move(services), mode, routing);
}

std::vector<int> QueueModel::stable_loo_set() const {
    std::vector<int> out;
    for (int j = 0; j < n(); j++)
        if (n() > 1 && load_without(j) < 1.0) out.push_back(j);
    return out;
}

}  // namespace ggnlab
