"""Services package for the combinatorial, exact and numeric machinery."""
