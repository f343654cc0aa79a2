# Tests for the correlated graph regression library
