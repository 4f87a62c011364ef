# Band Norm Package
