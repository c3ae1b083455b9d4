"""Ground-truth exploration and machine checks of the reduction conditions."""
