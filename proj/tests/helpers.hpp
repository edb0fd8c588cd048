#ifndef RPLAB_TEST_HELPERS_HPP
#define RPLAB_TEST_HELPERS_HPP

#include <memory>

#include "rplab/flow_model.hpp"

namespace rplab::test
{

inline std::shared_ptr<const FuchsianGroup> bolza()
{
    static const auto g = std::make_shared<const FuchsianGroup>(FuchsianGroup::bolza());
    return g;
}

inline const FlowModel& exact_model()
{
    static const FlowModel m = make_model(bolza(), FlowKind::ConstantCurvature, 0.0);
    return m;
}

inline const FlowModel& perturbed_model()
{
    static const FlowModel m = make_model(bolza(), FlowKind::ConformalPerturbation, 0.05);
    return m;
}

} // namespace rplab::test

#endif
