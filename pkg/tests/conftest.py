import hypothesis

# numeric tests have wildly varying per-example cost; wall-clock deadlines
# just make them flaky
hypothesis.settings.register_profile("numeric", deadline=None)
hypothesis.settings.load_profile("numeric")
