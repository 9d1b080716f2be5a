"""Product-vector sets, Bell inequalities and no-signalling certificates."""
