from hypothesis import settings

# property tests must not flake from run to run
settings.register_profile("deterministic", derandomize=True)
settings.load_profile("deterministic")
