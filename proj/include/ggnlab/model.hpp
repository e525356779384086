#pragma once

#include <vector>

#include "ggnlab/dist.hpp"

namespace ggnlab {

// Original: FCFS with idle servers, a router assigns arrivals to free servers.
// Modified: servers never idle; a server finishing with an empty queue starts
// an independent placeholder job, so each server's completion process is a
// plain renewal process.
enum class Mode { Original, Modified };

enum class Routing { UniformRandomIdle, FastestIdle };

class QueueModel {
public:
    QueueModel(DistributionSpec arrival, std::vector<DistributionSpec> services,
               Mode mode, Routing routing = Routing::UniformRandomIdle);

    static QueueModel homogeneous(DistributionSpec arrival, DistributionSpec service,
                                  int n, Mode mode,
                                  Routing routing = Routing::UniformRandomIdle);

    const DistributionSpec& arrival() const { return arrival_; }
    const DistributionSpec& service(int i) const { return services_[i]; }
    const std::vector<DistributionSpec>& services() const { return services_; }
    Mode mode() const { return mode_; }
    Routing routing() const { return routing_; }

    int n() const { return static_cast<int>(services_.size()); }
    double arrival_rate() const { return arrival_rate_; }          // Lambda
    double service_rate(int i) const { return service_rates_[i]; } // mu_i
    double total_service_rate() const { return total_rate_; }      // mu_Sigma
    double load() const { return arrival_rate_ / total_rate_; }    // rho
    // Load of the system with server j removed.
    double load_without(int j) const {
        return arrival_rate_ / (total_rate_ - service_rates_[j]);
    }
    bool homogeneous_services() const { return homogeneous_; }

    // Servers whose removal leaves a subcritical system (rho_{-j} < 1).
    std::vector<int> stable_loo_set() const;

private:
    DistributionSpec arrival_;
    std::vector<DistributionSpec> services_;
    Mode mode_;
    Routing routing_;
    double arrival_rate_ = 0.0;
    std::vector<double> service_rates_;
    double total_rate_ = 0.0;
    bool homogeneous_ = true;
};

}  // namespace ggnlab
