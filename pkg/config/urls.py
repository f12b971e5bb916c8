# The toolkit is driven by management commands and exposes no HTTP routes.
urlpatterns = []
