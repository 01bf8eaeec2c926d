"""
One conversational turn through the orchestration loop
======================================================

A user query is decomposed into a plan, the plan is checked, each task runs
through a registered tool, and a verifier decides whether the collected
results are good enough to answer from. A fault-injected second run shows
the loop replanning until the tool recovers.
"""

from motionagents.agents.types import UserQuery
from motionagents.media import MediaRef
from motionagents.service.config import EngineConfig, build_bundle

# Build an engine from the all-template config: every model role is served
# by deterministic rules, so the walkthrough behaves the same on any machine.
bundle = build_bundle(EngineConfig.template_default())

# Stream progress events while the turn runs.
def show(name, data):
    if name == "task_finished":
        print(f"  event {name}: {data['task_id']} -> {data['status']}")
    elif name == "verdict":
        print(f"  event {name}: stage={data['stage']}"
              f" decision={data['verdict']['decision']}")
    else:
        print(f"  event {name}")

query = UserQuery(
    text="What is the person doing in this clip?",
    attachments=(MediaRef("demo-clip", motion_path="demo-clip.npy"),),
)
print("running a clean turn:")
trace = bundle.engine.run_turn(query, turn_id="demo:0", emit=show)

print(f"\nfinal status: {trace.final_status}")
print(f"rounds used:  {len(trace.rounds)}")
print(f"answer:       {trace.answer}")

# The trace records everything: the plan that was approved, every tool
# outcome, and the verdicts. Round one's plan shows the meta-task chain.
plan = trace.rounds[0].plan
print("\napproved plan, version", plan.version)
for task in plan.tasks:
    deps = ", ".join(task.depends_on) or "none"
    print(f"  {task.task_id}: {task.capability} (depends on: {deps})")

# Now inject a fault: the answer generator fails on its first call. The
# results verifier rejects the round, the planner is asked to revise, and
# the second round succeeds once the tool recovers.
faulty = build_bundle(EngineConfig.from_dict({
    **EngineConfig.template_default().to_dict(),
    "tools": ["analyze_motion", "count_repetitions", "aggregate",
              {"name": "generate_answer", "fail_times": 1}],
}))
print("\nrunning a turn with one injected tool failure:")
trace = faulty.engine.run_turn(query, turn_id="demo:1", emit=show)
print(f"\nfinal status: {trace.final_status} after {len(trace.rounds)} rounds")
for round_ in trace.rounds:
    verdict = round_.results_verdict
    print(f"  round {round_.plan.version}: verdict={verdict.decision}"
          f" hints={list(verdict.revision_hints)}")
