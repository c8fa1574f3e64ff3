"""Two-coloured diagrammatic calculus of relations."""
