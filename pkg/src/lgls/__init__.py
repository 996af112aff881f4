"""Link scheduling for STDMA wireless networks under the SINR model."""
